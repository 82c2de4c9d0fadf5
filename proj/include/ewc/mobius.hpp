#pragma once

// Mobius maps of the closed unit disc, M(w) = alpha (w + beta) / (conj(beta) w + 1),
// and the identities that tie them (and the Poisson kernel) to the WC and EWC
// densities.

#include <complex>
#include <cstdint>

#include "ewc/core.hpp"

namespace ewc::mobius {

class MobiusMap {
 public:
  /// Requires | |alpha| - 1 | <= 1e-14.
  MobiusMap(std::complex<double> alpha, DiskPoint beta);
  static MobiusMap identity() { return {{1.0, 0.0}, DiskPoint()}; }
  static MobiusMap rotation(double angle) { return {std::polar(1.0, angle), DiskPoint()}; }

  [[nodiscard]] std::complex<double> alpha() const { return alpha_; }
  [[nodiscard]] DiskPoint beta() const { return beta_; }

  /// Requires |w| <= 1 + 1e-12.
  [[nodiscard]] std::complex<double> apply(std::complex<double> w) const;
  [[nodiscard]] DiskPoint apply(DiskPoint w) const;
  /// M'(w) = alpha (1 - |beta|^2) / (conj(beta) w + 1)^2.
  [[nodiscard]] std::complex<double> derivative(std::complex<double> w) const;
  /// The inverse map, again of Mobius form: (conj(alpha), -alpha beta).
  [[nodiscard]] MobiusMap inverse() const;

 private:
  std::complex<double> alpha_;
  DiskPoint beta_;
};

/// |M'(z)|^2 for |z| = 1.
double derivative_modulus_sq(const MobiusMap& m, std::complex<double> z);

/// |f(z; phi1, phi2) - f(M(z); M(phi1), M(phi2)) |M'(z)|^2|.
double invariance_residual(std::complex<double> z, const EwcParams& p, const MobiusMap& m);

/// Same comparison for the unnormalized kernel P(z; phi1) P(z; phi2), with
/// P(z; phi) = (1 - |phi|^2) / |z - phi|^2. Relative residual.
double kernel_invariance_residual(std::complex<double> z, const EwcParams& p, const MobiusMap& m);

/// f(z; phi1, phi2) / (f(M z; M phi1, M phi2) |M'(z)|^2). Does not depend on z;
/// differs from 1 unless the normalizing constant happens to transform covariantly.
double invariance_ratio(std::complex<double> z, const EwcParams& p, const MobiusMap& m);

/// The weight-1 analogue for the wrapped Cauchy C*(phi1).
double wc_weight1_residual(std::complex<double> z, DiskPoint phi1, const MobiusMap& m);

enum class Harmonic { constant, real_power, imag_power };

/// u(w) for u in {1, Re w^k, Im w^k}.
double harmonic_value(Harmonic kind, int k, std::complex<double> w);

/// Quadrature of u(z) against the C*(phi1) density minus u(phi1).
double poisson_integral_check(Harmonic kind, int k, DiskPoint phi1);

/// WC(mu1, rho1) * WC(mu2, rho2) = WC(mu1 + mu2, rho1 rho2).
WcParams wc_convolve(const WcParams& p1, const WcParams& p2);

/// k(theta) = f(theta) g(tau - theta) / (f * g)(tau) for WC densities f and g.
double conditioning_density(const WcParams& f, const WcParams& g, CircAngle tau, CircAngle theta);

/// Density of M(Z) at w (|w| = 1) when Z ~ EWC(p), by change of variables.
double pushforward_density(std::complex<double> w, const EwcParams& p, const MobiusMap& m);

struct NonClosureReport {
  EwcParams matched;                  // EWC with the same E(Z), E(Z^2) as M(Z)
  double moment_mismatch;             // residual |dE(Z)| + |dE(Z^2)| of the match
  double sup_gap;                     // max over a grid of |pushforward - matched density|
};

/// Fits an EWC to the first two trigonometric moments of M(Z) by multistart
/// simplex search and reports the sup-norm density gap on a 2048-point grid.
NonClosureReport non_closure_gap(const EwcParams& p, const MobiusMap& m);

}  // namespace ewc::mobius
