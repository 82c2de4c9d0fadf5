#include "ewc/shape.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/Polynomials>

#include "ewc/error.hpp"

namespace ewc {
namespace {

constexpr double kSymmetryTol = 1e-12;

double circular_distance(double a, double b) {
  const double d = std::abs(angle_diff(a, b));
  return std::min(d, kTwoPi - d);
}

double polish_root(const StationaryCoeffs& c, double theta) {
  for (int it = 0; it < 100; ++it) {
    const double g = c.residual(theta);
    const double dg = c.residual_derivative(theta);
    if (dg == 0.0) break;
    const double step = g / dg;
    theta -= std::clamp(step, -0.5, 0.5);
    if (std::abs(step) < 1e-15) break;
  }
  return normalize_angle(theta);
}

}  // namespace

SymmetryResult is_symmetric(const EwcParams& p) {
  const double r1 = p.rho1();
  const double r2 = p.rho2();
  const double m1 = p.mu1().value();
  const double m2 = p.mu2().value();
  if (r2 <= kSymmetryTol) return {true, p.mu1()};
  if (r1 <= kSymmetryTol) return {true, p.mu2()};
  if (circular_distance(m1, m2) <= kSymmetryTol) return {true, p.mu1()};
  if (circular_distance(m1, m2 + kPi) <= kSymmetryTol) return {true, p.mu2()};
  if (std::abs(r1 - r2) <= kSymmetryTol) {
    return {true, CircAngle(std::arg(std::polar(1.0, m1) + std::polar(1.0, m2)))};
  }
  return {false, std::nullopt};
}

double StationaryCoeffs::residual(double theta) const {
  const double t = theta - shift;
  const double c = std::cos(t);
  const double s = std::sin(t);
  return a0 + a1 * c + a2 * s + a3 * c * s + a4 * c * c;
}

double StationaryCoeffs::residual_derivative(double theta) const {
  const double t = theta - shift;
  const double c = std::cos(t);
  const double s = std::sin(t);
  return -a1 * s + a2 * c + a3 * (c * c - s * s) - 2.0 * a4 * c * s;
}

StationaryCoeffs stationary_coeffs(const EwcParams& p) {
  const double r1 = p.rho1();
  const double r2 = p.rho2();
  const double m = angle_diff(p.mu1().value(), p.mu2().value());
  const double sm = std::sin(m);
  const double cm = std::cos(m);
  return {2.0 * r1 * r2 * sm,
          r1 * (1.0 + r2 * r2) * sm,
          -r1 * (1.0 + r2 * r2) * cm - r2 * (1.0 + r1 * r1),
          4.0 * r1 * r2 * cm,
          -4.0 * r1 * r2 * sm,
          p.mu2().value()};
}

std::array<double, 5> tan_half_quartic(const StationaryCoeffs& c) {
  return {c.a0 - c.a1 + c.a4, 2.0 * (c.a2 - c.a3), 2.0 * (c.a0 - c.a4), 2.0 * (c.a2 + c.a3),
          c.a0 + c.a1 + c.a4};
}

double quartic_discriminant(const std::array<double, 5>& q) {
  // Quad precision: near the modality boundary the discriminant vanishes to third order
  // in the parameters, so double rounding would swamp its sign.
  using Real = boost::multiprecision::cpp_bin_float_quad;
  const Real a = q[0], b = q[1], c = q[2], d = q[3], e = q[4];
  const Real disc = 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e - 128 * a * a * c * c * e * e +
         144 * a * a * c * d * d * e - 27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
         6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e + 18 * a * b * c * d * d * d +
         16 * a * c * c * c * c * e - 4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
         18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d - 4 * b * b * c * c * c * e +
         b * b * c * c * d * d;
  return static_cast<double>(disc);
}

ModalityReport modality(const EwcParams& p) {
  if (p.rho1() == 0.0 && p.rho2() == 0.0) throw DomainError("the circular uniform distribution has no modes");

  const StationaryCoeffs coeffs = stationary_coeffs(p);
  std::array<double, 5> q = tan_half_quartic(coeffs);
  double scale = 0.0;
  for (double v : q) scale = std::max(scale, std::abs(v));
  for (double& v : q) v /= scale;

  ModalityReport report{};
  report.discriminant = quartic_discriminant(q);
  if (report.discriminant > kBoundaryTolerance) {
    report.classification = Modality::bimodal;
  } else if (report.discriminant < -kBoundaryTolerance) {
    report.classification = Modality::unimodal;
  } else {
    report.classification = Modality::boundary;
  }

  // Candidate stationary points: real roots of the quartic plus t = pi, which
  // the tan-half-angle substitution sends to infinity.
  std::vector<double> candidates{coeffs.shift + kPi};
  std::size_t lead = 0;
  while (lead < 4 && std::abs(q[lead]) < 1e-14) ++lead;
  const int degree = 4 - static_cast<int>(lead);
  if (degree >= 1) {
    Eigen::VectorXd poly(degree + 1);
    for (int k = 0; k <= degree; ++k) poly[k] = q[4 - k];  // lowest degree first
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(poly);
    for (const auto& root : solver.roots()) {
      if (std::abs(root.imag()) <= 1e-3 * (1.0 + std::abs(root))) {
        candidates.push_back(coeffs.shift + 2.0 * std::atan(root.real()));
      }
    }
  }

  double residual_scale = 0.0;
  for (double v : {coeffs.a0, coeffs.a1, coeffs.a2, coeffs.a3, coeffs.a4}) {
    residual_scale = std::max(residual_scale, std::abs(v));
  }
  std::vector<double> roots;
  for (double candidate : candidates) {
    const double theta = polish_root(coeffs, candidate);
    if (std::abs(coeffs.residual(theta)) > 1e-12 * residual_scale) continue;
    const bool duplicate = std::any_of(roots.begin(), roots.end(),
                                       [&](double r) { return circular_distance(r, theta) < 1e-7; });
    if (!duplicate) roots.push_back(theta);
  }
  std::sort(roots.begin(), roots.end());

  constexpr double h = 1e-4;
  for (double theta : roots) {
    const double f0 = ewc_density(CircAngle(theta), p);
    const double curvature =
        ewc_density(CircAngle(theta + h), p) - 2.0 * f0 + ewc_density(CircAngle(theta - h), p);
    // For the flattest densities the second difference drowns in rounding; the
    // sign of the stationary equation's slope is then used (f' is a positive
    // multiple of the residual, so f'' has the sign of its derivative).
    const double sign = std::abs(curvature) > 1e-13 * f0 ? curvature : coeffs.residual_derivative(theta);
    if (sign < 0.0) {
      report.modes.push_back({CircAngle(theta), f0});
    } else if (sign > 0.0) {
      report.antimodes.push_back({CircAngle(theta), f0});
    }
  }
  return report;
}

double symmetric1_density(CircAngle theta, CircAngle mu, double rho1, double rho2) {
  if (!(rho1 > -1.0 && rho1 < 1.0) || !(rho2 >= 0.0 && rho2 < 1.0)) {
    throw DomainError("symmetric submodel requires -1 < rho1 < 1 and 0 <= rho2 < 1");
  }
  const double d = theta.value() - mu.value();
  const double rr = rho1 * rho2;
  return (1.0 - rr) / (kTwoPi * (1.0 + rr)) * (1.0 - rho1 * rho1) / wc_kernel(d, rho1) *
         (1.0 - rho2 * rho2) / wc_kernel(d, rho2);
}

MixtureDecomposition mixture_decomposition(CircAngle mu, double rho1, double rho2) {
  if (!(rho1 > -1.0 && rho1 <= 0.0)) throw DomainError("mixture representation requires -1 < rho1 <= 0");
  if (!(rho2 >= 0.0 && rho2 < 1.0)) throw DomainError("rho2 must lie in [0, 1)");
  const double weight =
      rho1 == 0.0 ? 0.0 : -rho1 * (1.0 - rho2 * rho2) / ((1.0 + rho1 * rho2) * (rho2 - rho1));
  return {weight, WcParams(mu.value() + kPi, -rho1), WcParams(mu.value(), rho2)};
}

double symmetric2_unimodality_margin(double rho, CircAngle dmu) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
  const double x = std::clamp(2.0 * rho / (1.0 + rho * rho), 0.0, 1.0);
  return 2.0 * std::acos(x) - std::abs(dmu.value());
}

bool symmetric2_unimodality(double rho, CircAngle dmu) { return symmetric2_unimodality_margin(rho, dmu) >= 0.0; }

}  // namespace ewc
