#pragma once

// Simulation oracle for the Brownian-motion derivations of the EWC law.
//
// conditional_exit_sample() follows a planar Brownian particle from
// rho1 exp(i mu1) to its first exit from the unit disc (angle theta1), then on
// to its first exit from the disc of radius 1/rho2 (angle theta2), and keeps
// theta1 whenever theta2 falls within epsilon of mu2.
//
// conditional_equal_sample() conditions two independent wrapped Cauchy exit
// points on coinciding to within epsilon.
//
// Both use an angular ABC window for the measure-zero conditioning event.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "ewc/core.hpp"
#include "ewc/execution.hpp"
#include "ewc/rng.hpp"
#include "ewc/sampling.hpp"

namespace ewc::oracle {

struct WalkConfig {
  /// Per-axis Gaussian increment scale near a boundary (sqrt of the time step).
  double step_std = 0.005;
  std::int64_t max_steps = 100'000'000;
  /// ABC half-width for the conditioning angle, radians.
  double epsilon = 0.05;
  /// Away from the target circle the increment scale grows to
  /// far_field_ratio * (distance to the circle), never below step_std.
  /// Sampling Brownian motion at position-dependent times leaves its law
  /// unchanged; 0 gives a plain fixed-step walk.
  double far_field_ratio = 0.2;
  std::size_t bins = 72;

  void validate() const;
};

struct ExitPoint {
  CircAngle angle;                // angle of the interpolated crossing point
  std::complex<double> position;  // walk state after the crossing step
  std::int64_t steps;
};

/// Walks from `start` until the first step that leaves the circle of the
/// given radius. The crossing is located by linear interpolation along the
/// final step and projected radially onto the circle.
ExitPoint walk_to_exit(std::complex<double> start, double radius, const WalkConfig& cfg, Rng& rng);

/// Angle of walk_to_exit(). Throws NumericalError when max_steps is exceeded.
CircAngle simulate_exit(std::complex<double> start, double radius, const WalkConfig& cfg, Rng& rng);

struct OracleReport {
  std::size_t n_accepted = 0;
  std::size_t n_attempted = 0;
  double l1_distance = 0.0;  // sum over bins of |empirical - exact| bin probability
  double ks_statistic = 0.0;
  std::size_t bin_count = 0;
};

struct OracleResult {
  SampleBatch batch;
  OracleReport report;
};

/// Fills l1_distance, ks_statistic and bin_count against the EWC density.
OracleReport compare_to_density(std::span<const double> angles, const EwcParams& p, std::size_t bins);

/// Requires rho2 > 0. Throws NumericalError if the acceptance rate drops below 1e-5.
OracleResult conditional_exit_sample(const EwcParams& p, std::size_t n_target, const WalkConfig& cfg,
                                     std::uint64_t seed, Execution exec = Execution::parallel);

OracleResult conditional_equal_sample(const EwcParams& p, std::size_t n_target, double epsilon,
                                      std::uint64_t seed, Execution exec = Execution::parallel,
                                      std::size_t bins = 72);

}  // namespace ewc::oracle
