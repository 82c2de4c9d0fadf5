#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ewc/core.hpp"

namespace ewc {

enum class SampleMethod { wc_exact, rejection, inverse_cdf, mcmc, mixture };

std::string_view to_string(SampleMethod m);

struct SampleDiagnostics {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  std::optional<double> acceptance_rate;
  std::optional<double> effective_sample_size;
};

/// Angles in [-pi, pi) plus the metadata needed to reproduce them.
/// Identical (seed, method, params, n, config) reproduce the batch bit for bit.
struct SampleBatch {
  std::vector<double> angles;
  std::uint64_t seed = 0;
  SampleMethod method = SampleMethod::wc_exact;
  SampleDiagnostics diagnostics;
};

struct McmcConfig {
  int burn_in = 1000;
  int thin = 10;
  int chain_count = 1;

  void validate() const;
};

/// One exact WC draw from a uniform variate u in (0, 1).
double wc_inverse_cdf(double u, const WcParams& p);

SampleBatch sample_wc(const WcParams& p, std::size_t n, std::uint64_t seed);

/// Rejection bound M = 2 pi C / {(1 - rho_a^2)(1 - rho_b)^2} for the label
/// assignment (a proposes, b is the envelope factor) that minimises M.
double rejection_bound(const EwcParams& p);

/// Exact draws by rejection from the more concentrated WC factor.
SampleBatch sample_ewc_rejection(const EwcParams& p, std::size_t n, std::uint64_t seed);

/// Solves cdf(theta) = U to |cdf(theta) - U| < tol by safeguarded Newton on a bracket.
/// Throws NumericalError after 200 iterations.
double ewc_inverse_cdf(double u, const EwcParams& p, double tol = 1e-12);

SampleBatch sample_ewc_invcdf(const EwcParams& p, std::size_t n, std::uint64_t seed, double tol = 1e-12);

/// Independence Metropolis-Hastings on the posterior of the WC location:
/// proposals from the prior WC(mu2, rho2), likelihood WC(mu1 | nu, rho1).
SampleBatch sample_ewc_mcmc(const EwcParams& p, std::size_t n, const McmcConfig& cfg, std::uint64_t seed);

/// Exact draws from the symmetric submodel with rho1 <= 0 via its two-component
/// WC mixture.
SampleBatch sample_symmetric_mixture(CircAngle mu, double rho1, double rho2, std::size_t n, std::uint64_t seed);

}  // namespace ewc
