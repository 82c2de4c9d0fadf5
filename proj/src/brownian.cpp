#include "ewc/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <vector>

#include "ewc/error.hpp"
#include "ewc/probability.hpp"
#include "ewc/stats.hpp"

namespace ewc::oracle {
namespace {

constexpr double kMinAcceptance = 1e-5;
constexpr std::size_t kMinAttemptsForRateCheck = 100'000;

// Attempts are grouped in blocks; block b draws from the stream (seed, b) and
// runs its attempts in order. Accepted values are appended in attempt order,
// so the output does not depend on the thread count.
template <typename Attempt>
std::vector<double> run_abc(std::size_t n_target, std::uint64_t seed, std::size_t block_size, Execution exec,
                            Attempt&& attempt, std::size_t& attempted) {
  constexpr std::size_t kBlocksPerChunk = 64;
  const std::size_t chunk = block_size * kBlocksPerChunk;
  std::vector<double> accepted;
  accepted.reserve(n_target);
  std::vector<std::optional<double>> results(chunk);
  attempted = 0;
  std::size_t first_block = 0;

  const auto run_block = [&](std::size_t b) {
    Rng rng(seed, first_block + b);
    for (std::size_t k = 0; k < block_size; ++k) results[b * block_size + k] = attempt(rng);
  };

  while (accepted.size() < n_target) {
    const auto blocks = static_cast<std::int64_t>(kBlocksPerChunk);
    if (exec == Execution::parallel) {
      std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t b = 0; b < blocks; ++b) {
        try {
          run_block(static_cast<std::size_t>(b));
        } catch (...) {
#pragma omp critical(ewc_abc_failure)
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    } else {
      for (std::int64_t b = 0; b < blocks; ++b) run_block(static_cast<std::size_t>(b));
    }
    for (std::size_t k = 0; k < chunk && accepted.size() < n_target; ++k) {
      ++attempted;
      if (results[k]) accepted.push_back(*results[k]);
    }
    first_block += kBlocksPerChunk;
    if (attempted >= kMinAttemptsForRateCheck &&
        static_cast<double>(accepted.size()) < kMinAcceptance * static_cast<double>(attempted)) {
      throw NumericalError("ABC acceptance rate fell below 1e-5; enlarge epsilon");
    }
  }
  return accepted;
}

}  // namespace

void WalkConfig::validate() const {
  if (!(step_std > 0.0) || !(epsilon > 0.0) || max_steps <= 0 || !(far_field_ratio >= 0.0) || bins == 0) {
    throw DomainError("walk config requires step_std > 0, epsilon > 0, max_steps > 0, bins > 0");
  }
}

ExitPoint walk_to_exit(std::complex<double> start, double radius, const WalkConfig& cfg, Rng& rng) {
  if (!(std::abs(start) < radius)) throw DomainError("walk must start strictly inside the circle");
  const double r2 = radius * radius;
  std::complex<double> z = start;
  for (std::int64_t step = 1; step <= cfg.max_steps; ++step) {
    const double distance = radius - std::abs(z);
    const double scale = std::max(cfg.step_std, cfg.far_field_ratio * distance);
    const auto [dx, dy] = rng.normal_pair();
    const std::complex<double> next = z + scale * std::complex<double>(dx, dy);
    if (std::norm(next) >= r2) {
      // |z + t d| = radius for t in (0, 1].
      const std::complex<double> d = next - z;
      const double a = std::norm(d);
      const double b = (std::conj(z) * d).real();
      const double c = std::norm(z) - r2;
      const double t = (-b + std::sqrt(b * b - a * c)) / a;
      const std::complex<double> crossing = z + t * d;
      return {CircAngle(std::arg(crossing)), next, step};
    }
    z = next;
  }
  throw NumericalError("Brownian walk exceeded max_steps before exiting");
}

CircAngle simulate_exit(std::complex<double> start, double radius, const WalkConfig& cfg, Rng& rng) {
  cfg.validate();
  return walk_to_exit(start, radius, cfg, rng).angle;
}

OracleReport compare_to_density(std::span<const double> angles, const EwcParams& p, std::size_t bins) {
  OracleReport report;
  report.n_accepted = angles.size();
  report.bin_count = bins;
  report.l1_distance = histogram_l1(angles, bins, [&](double lo, double hi) { return interval_probability(lo, hi, p); });
  report.ks_statistic = ks_statistic(angles, [&](double t) { return cdf(CircAngle(t), p); });
  return report;
}

OracleResult conditional_exit_sample(const EwcParams& p, std::size_t n_target, const WalkConfig& cfg,
                                     std::uint64_t seed, Execution exec) {
  cfg.validate();
  if (!(p.rho2() > 0.0)) throw DomainError("the walk oracle needs rho2 > 0 (outer radius 1/rho2)");
  if (n_target == 0) throw DomainError("n_target must be positive");
  const std::complex<double> start = p.phi1();
  const double outer = 1.0 / p.rho2();
  const double target = p.mu2().value();

  const auto attempt = [&](Rng& rng) -> std::optional<double> {
    const ExitPoint first = walk_to_exit(start, 1.0, cfg, rng);
    // The particle continues from wherever the crossing step left it.
    const ExitPoint second = std::abs(first.position) >= outer
                                 ? ExitPoint{CircAngle(std::arg(first.position)), first.position, 0}
                                 : walk_to_exit(first.position, outer, cfg, rng);
    if (std::abs(angle_diff(second.angle.value(), target)) < cfg.epsilon) return first.angle.value();
    return std::nullopt;
  };

  OracleResult result;
  std::size_t attempted = 0;
  result.batch.angles = run_abc(n_target, seed, 16, exec, attempt, attempted);
  result.batch.seed = seed;
  result.batch.method = SampleMethod::rejection;
  result.batch.diagnostics.proposals = attempted;
  result.batch.diagnostics.accepted = result.batch.angles.size();
  result.batch.diagnostics.acceptance_rate = static_cast<double>(result.batch.angles.size()) / static_cast<double>(attempted);
  result.report = compare_to_density(result.batch.angles, p, cfg.bins);
  result.report.n_attempted = attempted;
  return result;
}

OracleResult conditional_equal_sample(const EwcParams& p, std::size_t n_target, double epsilon,
                                      std::uint64_t seed, Execution exec, std::size_t bins) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (n_target == 0 || bins == 0) throw DomainError("n_target and bins must be positive");
  const WcParams first(p.mu1().value(), p.rho1());
  const WcParams second(p.mu2().value(), p.rho2());

  const auto attempt = [&](Rng& rng) -> std::optional<double> {
    const double z1 = wc_inverse_cdf(rng.uniform(), first);
    const double z2 = wc_inverse_cdf(rng.uniform(), second);
    if (std::abs(angle_diff(z1, z2)) < epsilon) return z1;
    return std::nullopt;
  };

  OracleResult result;
  std::size_t attempted = 0;
  result.batch.angles = run_abc(n_target, seed, 1024, exec, attempt, attempted);
  result.batch.seed = seed;
  result.batch.method = SampleMethod::rejection;
  result.batch.diagnostics.proposals = attempted;
  result.batch.diagnostics.accepted = result.batch.angles.size();
  result.batch.diagnostics.acceptance_rate = static_cast<double>(result.batch.angles.size()) / static_cast<double>(attempted);
  result.report = compare_to_density(result.batch.angles, p, bins);
  result.report.n_attempted = attempted;
  return result;
}

}  // namespace ewc::oracle
