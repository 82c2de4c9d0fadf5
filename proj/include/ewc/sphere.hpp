#pragma once

// The spherical generalization. Dimension convention: S^d is the unit sphere
// in R^d, so d = 2 is the circle and d = 3 the ordinary sphere.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ewc/sampling.hpp"

namespace ewc::sphere {

class UnitVector {
 public:
  /// Requires d >= 2 and | ||coords|| - 1 | <= 1e-12.
  explicit UnitVector(std::vector<double> coords);
  /// Scales a nonzero vector to unit length.
  static UnitVector normalized(std::vector<double> coords);

  [[nodiscard]] int dim() const { return static_cast<int>(coords_.size()); }
  [[nodiscard]] std::span<const double> coords() const { return coords_; }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] double dot(const UnitVector& other) const;

 private:
  std::vector<double> coords_;
};

struct SphereParams {
  SphereParams(double rho1, UnitVector eta1, double rho2, UnitVector eta2);

  [[nodiscard]] int dim() const { return eta1.dim(); }

  double rho1;
  UnitVector eta1;
  double rho2;
  UnitVector eta2;
};

/// Surface area A_{d-1} = 2 pi^{d/2} / Gamma(d/2) of S^d.
double surface_area(int d);

/// (1 / A_{d-1}) (1 - rho1^2) / ||x - rho1 eta1||^d.
double exit_density(const UnitVector& x, double rho1, const UnitVector& eta1);

double sphere_density(const UnitVector& x, const SphereParams& p);

std::vector<UnitVector> sample_uniform_sphere(int d, std::size_t n, std::uint64_t seed);

struct SphereSample {
  std::vector<UnitVector> points;
  SampleDiagnostics diagnostics;
};

/// Exact draws from the exit distribution by rejection against the uniform
/// law with bound M = (1 + rho1) / (1 - rho1)^{d-1}.
SphereSample sample_exit(double rho1, const UnitVector& eta1, std::size_t n, std::uint64_t seed);

/// Independence Metropolis-Hastings: proposals from Exit(rho2 eta2), likelihood
/// Exit(eta1 | rho1 xi).
SphereSample sample_sphere_mcmc(const SphereParams& p, std::size_t n, const McmcConfig& cfg, std::uint64_t seed);

struct MonteCarloEstimate {
  double mean;
  double standard_error;
};

/// Monte Carlo estimate of the integral of f over S^d using uniform points.
MonteCarloEstimate sphere_integral_mc(int d, const std::function<double(const UnitVector&)>& f, std::size_t n,
                                      std::uint64_t seed);

/// Integral of f over S^2 in R^3 by a product rule: adaptive Gauss-Kronrod in the
/// polar angle (measured from the z axis), periodic trapezoid in azimuth.
double sphere_integral_d3(const std::function<double(const UnitVector&)>& f, double tol = 1e-11);

}  // namespace ewc::sphere
