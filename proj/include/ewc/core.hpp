#pragma once

// Parameter types, angle handling and the wrapped Cauchy / extended wrapped
// Cauchy densities.
//
// All angles are radians on [-pi, pi). The extended wrapped Cauchy (EWC)
// density is
//
//   f(theta) = C / (K(theta; mu1, rho1) * K(theta; mu2, rho2)),
//   K(theta; mu, rho) = 1 + rho^2 - 2 rho cos(theta - mu),
//
// with the closed-form normalizing constant C from normalizing_constant().
// The equivalent complex parametrization uses phi_j = rho_j exp(i mu_j).

#include <complex>
#include <numbers>

namespace ewc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces x modulo 2pi into [-pi, pi). Values already in range are returned unchanged.
double normalize_angle(double x);

/// Shortest signed angular difference a - b, in [-pi, pi).
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

class CircAngle {
 public:
  constexpr CircAngle() = default;
  explicit CircAngle(double radians) : value_(normalize_angle(radians)) {}

  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr bool operator==(CircAngle, CircAngle) = default;

 private:
  double value_ = 0.0;
};

/// A point of the open unit disc.
class DiskPoint {
 public:
  constexpr DiskPoint() = default;
  DiskPoint(double re, double im);
  explicit DiskPoint(std::complex<double> z) : DiskPoint(z.real(), z.imag()) {}

  static DiskPoint from_polar(double rho, double mu);

  [[nodiscard]] constexpr std::complex<double> value() const { return z_; }
  [[nodiscard]] constexpr double re() const { return z_.real(); }
  [[nodiscard]] constexpr double im() const { return z_.imag(); }
  [[nodiscard]] double modulus() const { return std::abs(z_); }

 private:
  std::complex<double> z_{0.0, 0.0};
};

struct WcParams {
  WcParams() = default;
  WcParams(double mu, double rho);

  CircAngle mu;
  double rho = 0.0;
};

class EwcParams {
 public:
  EwcParams() = default;
  EwcParams(double mu1, double mu2, double rho1, double rho2);

  static EwcParams from_complex(DiskPoint phi1, DiskPoint phi2);
  static EwcParams uniform() { return {}; }

  [[nodiscard]] CircAngle mu1() const { return mu1_; }
  [[nodiscard]] CircAngle mu2() const { return mu2_; }
  [[nodiscard]] double rho1() const { return rho1_; }
  [[nodiscard]] double rho2() const { return rho2_; }

  [[nodiscard]] std::complex<double> phi1() const { return std::polar(rho1_, mu1_.value()); }
  [[nodiscard]] std::complex<double> phi2() const { return std::polar(rho2_, mu2_.value()); }

  /// The same distribution with the labels (mu1, rho1) <-> (mu2, rho2) exchanged.
  [[nodiscard]] EwcParams swapped() const { return {mu2_.value(), mu1_.value(), rho2_, rho1_}; }

  /// Label-canonical form: rho1 >= rho2, ties broken by mu1 <= mu2.
  [[nodiscard]] EwcParams canonical() const;

  friend bool operator==(const EwcParams&, const EwcParams&) = default;

 private:
  CircAngle mu1_;
  CircAngle mu2_;
  double rho1_ = 0.0;
  double rho2_ = 0.0;
};

struct NormConstant {
  double value;
};

/// 1 + rho^2 - 2 rho cos(delta), evaluated as (1 - rho)^2 + 4 rho sin^2(delta / 2).
double wc_kernel(double delta, double rho);

double wc_density(CircAngle theta, const WcParams& p);
NormConstant normalizing_constant(const EwcParams& p);
double ewc_density(CircAngle theta, const EwcParams& p);

/// Density of Z = exp(i Theta) with respect to arc length. |z| must be 1 within 1e-12.
double ewc_density_complex(std::complex<double> z, DiskPoint phi1, DiskPoint phi2);

/// log f(theta), assembled from log C and the two log kernels so that it stays
/// finite when rho_j -> 1.
double log_density(CircAngle theta, const EwcParams& p);

}  // namespace ewc
