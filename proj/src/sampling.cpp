#include "ewc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ewc/error.hpp"
#include "ewc/probability.hpp"
#include "ewc/rng.hpp"
#include "ewc/shape.hpp"
#include "ewc/stats.hpp"

namespace ewc {

std::string_view to_string(SampleMethod m) {
  switch (m) {
    case SampleMethod::wc_exact: return "wc_exact";
    case SampleMethod::rejection: return "rejection";
    case SampleMethod::inverse_cdf: return "inverse_cdf";
    case SampleMethod::mcmc: return "mcmc";
    case SampleMethod::mixture: return "mixture";
  }
  return "unknown";
}

void McmcConfig::validate() const {
  if (burn_in < 0 || thin < 1 || chain_count < 1) {
    throw DomainError("MCMC config requires burn_in >= 0, thin >= 1, chain_count >= 1");
  }
}

double wc_inverse_cdf(double u, const WcParams& p) {
  const double ratio = (1.0 - p.rho) / (1.0 + p.rho);
  return normalize_angle(p.mu.value() + 2.0 * std::atan(ratio * std::tan(kPi * (u - 0.5))));
}

SampleBatch sample_wc(const WcParams& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be positive");
  Rng rng(seed);
  SampleBatch batch{{}, seed, SampleMethod::wc_exact, {}};
  batch.angles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.angles.push_back(wc_inverse_cdf(rng.uniform(), p));
  batch.diagnostics.proposals = batch.diagnostics.accepted = n;
  return batch;
}

namespace {

// (proposal, envelope) label assignment with the smaller rejection bound.
std::pair<WcParams, WcParams> rejection_labels(const EwcParams& p) {
  WcParams first(p.mu1().value(), p.rho1());
  WcParams second(p.mu2().value(), p.rho2());
  if (p.rho1() >= p.rho2()) return {first, second};
  return {second, first};
}

}  // namespace

double rejection_bound(const EwcParams& p) {
  const auto [proposal, envelope] = rejection_labels(p);
  const double one_minus = 1.0 - envelope.rho;
  return kTwoPi * normalizing_constant(p).value /
         ((1.0 - proposal.rho * proposal.rho) * one_minus * one_minus);
}

SampleBatch sample_ewc_rejection(const EwcParams& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be positive");
  const auto [proposal, envelope] = rejection_labels(p);
  const double floor = (1.0 - envelope.rho) * (1.0 - envelope.rho);
  Rng rng(seed);
  SampleBatch batch{{}, seed, SampleMethod::rejection, {}};
  batch.angles.reserve(n);
  std::size_t proposals = 0;
  while (batch.angles.size() < n) {
    const double theta = wc_inverse_cdf(rng.uniform(), proposal);
    ++proposals;
    // f / (M g) = (1 - rho_b)^2 / K(theta - mu_b; rho_b)
    const double accept = floor / wc_kernel(theta - envelope.mu.value(), envelope.rho);
    if (rng.uniform() < accept) batch.angles.push_back(theta);
  }
  batch.diagnostics.proposals = proposals;
  batch.diagnostics.accepted = n;
  batch.diagnostics.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
  return batch;
}

double ewc_inverse_cdf(double u, const EwcParams& p, double tol) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("inverse CDF requires u in (0, 1)");
  if (!(tol >= 1e-12)) throw DomainError("inverse CDF tolerance must be at least 1e-12");
  double lo = -kPi;
  double hi = kPi;
  double theta = -kPi + kTwoPi * u;
  for (int it = 0; it < 200; ++it) {
    const double residual = cdf(CircAngle(theta), p) - u;
    if (std::abs(residual) < tol) return theta;
    if (residual > 0.0) {
      hi = theta;
    } else {
      lo = theta;
    }
    const double newton = theta - residual / ewc_density(CircAngle(theta), p);
    theta = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  throw NumericalError("inverse CDF did not converge in 200 iterations");
}

SampleBatch sample_ewc_invcdf(const EwcParams& p, std::size_t n, std::uint64_t seed, double tol) {
  if (n == 0) throw DomainError("sample size must be positive");
  Rng rng(seed);
  SampleBatch batch{{}, seed, SampleMethod::inverse_cdf, {}};
  batch.angles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.angles.push_back(ewc_inverse_cdf(rng.uniform(), p, tol));
  batch.diagnostics.proposals = batch.diagnostics.accepted = n;
  return batch;
}

SampleBatch sample_ewc_mcmc(const EwcParams& p, std::size_t n, const McmcConfig& cfg, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be positive");
  cfg.validate();
  const WcParams prior(p.mu2().value(), p.rho2());
  const double observed = p.mu1().value();
  const double rho1 = p.rho1();
  const auto chains = static_cast<std::size_t>(cfg.chain_count);
  const std::size_t per_chain = (n + chains - 1) / chains;

  SampleBatch batch{{}, seed, SampleMethod::mcmc, {}};
  batch.angles.reserve(per_chain * chains);
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double ess = 0.0;
  for (std::size_t chain = 0; chain < chains; ++chain) {
    Rng rng(seed, chain);
    double nu = wc_inverse_cdf(rng.uniform(), prior);
    // Likelihood WC(observed | nu, rho1) is proportional to 1 / K(observed - nu; rho1).
    double kernel = wc_kernel(observed - nu, rho1);
    std::vector<double> draws;
    draws.reserve(per_chain);
    const std::size_t total = static_cast<std::size_t>(cfg.burn_in) + per_chain * static_cast<std::size_t>(cfg.thin);
    for (std::size_t step = 1; step <= total; ++step) {
      const double candidate = wc_inverse_cdf(rng.uniform(), prior);
      const double candidate_kernel = wc_kernel(observed - candidate, rho1);
      ++proposals;
      if (rng.uniform() * candidate_kernel < kernel) {
        nu = candidate;
        kernel = candidate_kernel;
        ++accepted;
      }
      if (step > static_cast<std::size_t>(cfg.burn_in) &&
          (step - static_cast<std::size_t>(cfg.burn_in)) % static_cast<std::size_t>(cfg.thin) == 0) {
        draws.push_back(nu);
      }
    }
    std::vector<double> cosines(draws.size());
    std::vector<double> sines(draws.size());
    std::transform(draws.begin(), draws.end(), cosines.begin(), [](double t) { return std::cos(t); });
    std::transform(draws.begin(), draws.end(), sines.begin(), [](double t) { return std::sin(t); });
    ess += std::min(effective_sample_size(cosines), effective_sample_size(sines));
    batch.angles.insert(batch.angles.end(), draws.begin(), draws.end());
  }
  batch.angles.resize(n);
  batch.diagnostics.proposals = proposals;
  batch.diagnostics.accepted = accepted;
  batch.diagnostics.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposals);
  batch.diagnostics.effective_sample_size = ess * static_cast<double>(n) / static_cast<double>(per_chain * chains);
  return batch;
}

SampleBatch sample_symmetric_mixture(CircAngle mu, double rho1, double rho2, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be positive");
  const MixtureDecomposition mix = mixture_decomposition(mu, rho1, rho2);
  Rng rng(seed);
  SampleBatch batch{{}, seed, SampleMethod::mixture, {}};
  batch.angles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pick_first = rng.uniform() < mix.weight;
    batch.angles.push_back(wc_inverse_cdf(rng.uniform(), pick_first ? mix.first : mix.second));
  }
  batch.diagnostics.proposals = batch.diagnostics.accepted = n;
  return batch;
}

}  // namespace ewc
