#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ewc/core.hpp"
#include "ewc/execution.hpp"

namespace ewc::fit {

/// A nonempty set of angles normalized to [-pi, pi).
class Dataset {
 public:
  explicit Dataset(std::vector<double> angles, std::string source = "inline");

  [[nodiscard]] std::span<const double> angles() const { return angles_; }
  [[nodiscard]] std::size_t size() const { return angles_.size(); }
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  std::vector<double> angles_;
  std::string source_;
};

/// Log-likelihood evaluator with the data's unit vectors cached, so that each
/// evaluation costs one logarithm per observation. Partial sums are formed
/// over fixed blocks and combined in block order, so the serial and OpenMP
/// paths agree bit for bit.
class LogLikelihood {
 public:
  explicit LogLikelihood(const Dataset& data);

  [[nodiscard]] double operator()(const EwcParams& p, Execution exec = Execution::parallel) const;
  [[nodiscard]] std::size_t size() const { return cos_.size(); }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Sum of log_density over the observations.
double loglik(const Dataset& data, const EwcParams& p, Execution exec = Execution::parallel);

/// Moment estimator: mu = arg mean(e^{i theta}), rho = |mean(e^{i theta})|.
/// Requires n >= 2; throws DomainError when the sample is degenerate.
WcParams fit_wc(const Dataset& data);

struct FitOptions {
  /// Threads used for the multistart (OpenMP); results do not depend on it.
  int jobs = 1;
  int max_evaluations = 4000;
};

struct FitResult {
  EwcParams params;  // canonical: rho1 >= rho2, ties broken by mu1 <= mu2
  double loglik;
  bool converged;
  int iterations;
  /// Standard errors for (mu1, mu2, rho1, rho2) from the observed information;
  /// present only when that matrix is positive definite.
  std::optional<std::array<double, 4>> standard_errors;
  EwcParams init;    // the start whose local optimum was returned
  double gradient_norm;  // of the mean log-likelihood in the optimizer coordinates
  bool near_boundary;    // some rho exceeds 0.999
};

/// Upper end of the fitted rho range.
inline constexpr double kMaxFittedRho = 1.0 - 1e-6;

/// Maximum likelihood by multistart Nelder-Mead over (mu1, mu2, t1, t2) with
/// rho_j = kMaxFittedRho * sigmoid(t_j), followed by a Newton polish.
/// Requires n >= 8.
FitResult fit_ewc(const Dataset& data, const std::optional<EwcParams>& init = std::nullopt,
                  const FitOptions& options = {});

/// The default multistart points for a dataset (the WC fit and its label swap first).
std::vector<EwcParams> default_starts(const Dataset& data);

}  // namespace ewc::fit
