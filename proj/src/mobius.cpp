#include "ewc/mobius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ewc/error.hpp"
#include "ewc/moments.hpp"
#include "ewc/optimize.hpp"
#include "ewc/quadrature.hpp"

namespace ewc::mobius {
namespace {

// Radial projection, skipped when rounding is the only discrepancy.
std::complex<double> on_circle(std::complex<double> w) {
  const double r = std::abs(w);
  return std::abs(r - 1.0) <= 1e-14 ? w : w / r;
}

double sigmoid_radius(double t) { return (1.0 - 1e-9) / (1.0 + std::exp(-t)); }

}  // namespace

MobiusMap::MobiusMap(std::complex<double> alpha, DiskPoint beta) : alpha_(alpha), beta_(beta) {
  if (!(std::abs(std::abs(alpha) - 1.0) <= 1e-14)) throw DomainError("Mobius alpha must have modulus 1");
}

std::complex<double> MobiusMap::apply(std::complex<double> w) const {
  if (!(std::abs(w) <= 1.0 + 1e-12)) throw DomainError("Mobius map is defined on the closed unit disc");
  const std::complex<double> b = beta_.value();
  return alpha_ * (w + b) / (std::conj(b) * w + 1.0);
}

DiskPoint MobiusMap::apply(DiskPoint w) const { return DiskPoint(apply(w.value())); }

std::complex<double> MobiusMap::derivative(std::complex<double> w) const {
  const std::complex<double> b = beta_.value();
  const std::complex<double> den = std::conj(b) * w + 1.0;
  return alpha_ * (1.0 - std::norm(b)) / (den * den);
}

MobiusMap MobiusMap::inverse() const { return {std::conj(alpha_), DiskPoint(-alpha_ * beta_.value())}; }

double derivative_modulus_sq(const MobiusMap& m, std::complex<double> z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw DomainError("z must lie on the unit circle");
  return std::norm(m.derivative(z));
}

double invariance_residual(std::complex<double> z, const EwcParams& p, const MobiusMap& m) {
  const DiskPoint phi1(p.phi1());
  const DiskPoint phi2(p.phi2());
  const double direct = ewc_density_complex(z, phi1, phi2);
  const double mapped = ewc_density_complex(on_circle(m.apply(z)), m.apply(phi1), m.apply(phi2));
  return std::abs(direct - mapped * derivative_modulus_sq(m, z));
}

double kernel_invariance_residual(std::complex<double> z, const EwcParams& p, const MobiusMap& m) {
  const auto kernel = [](std::complex<double> w, std::complex<double> a, std::complex<double> b) {
    return (1.0 - std::norm(a)) / std::norm(w - a) * (1.0 - std::norm(b)) / std::norm(w - b);
  };
  const std::complex<double> a = p.phi1(), b = p.phi2();
  const double direct = kernel(z, a, b);
  const double mapped = kernel(m.apply(z), m.apply(a), m.apply(b)) * derivative_modulus_sq(m, z);
  return std::abs(direct - mapped) / direct;
}

double invariance_ratio(std::complex<double> z, const EwcParams& p, const MobiusMap& m) {
  const DiskPoint phi1(p.phi1());
  const DiskPoint phi2(p.phi2());
  const double mapped = ewc_density_complex(on_circle(m.apply(z)), m.apply(phi1), m.apply(phi2));
  return ewc_density_complex(z, phi1, phi2) / (mapped * derivative_modulus_sq(m, z));
}

double wc_weight1_residual(std::complex<double> z, DiskPoint phi1, const MobiusMap& m) {
  const double direct = ewc_density_complex(z, phi1, DiskPoint());
  const double mapped = ewc_density_complex(on_circle(m.apply(z)), m.apply(phi1), DiskPoint());
  return std::abs(direct - mapped * std::sqrt(derivative_modulus_sq(m, z)));
}

double harmonic_value(Harmonic kind, int k, std::complex<double> w) {
  switch (kind) {
    case Harmonic::constant: return 1.0;
    case Harmonic::real_power: return std::pow(w, k).real();
    case Harmonic::imag_power: return std::pow(w, k).imag();
  }
  return 0.0;
}

double poisson_integral_check(Harmonic kind, int k, DiskPoint phi1) {
  if (k < 0) throw DomainError("harmonic degree must be nonnegative");
  const auto integral = periodic_trapezoid_adaptive(
      [&](double t) {
        const std::complex<double> z = std::polar(1.0, t);
        return harmonic_value(kind, k, z) * ewc_density_complex(z, phi1, DiskPoint());
      },
      1e-14);
  return integral.value - harmonic_value(kind, k, phi1.value());
}

WcParams wc_convolve(const WcParams& p1, const WcParams& p2) {
  return {p1.mu.value() + p2.mu.value(), p1.rho * p2.rho};
}

double conditioning_density(const WcParams& f, const WcParams& g, CircAngle tau, CircAngle theta) {
  const double h = wc_density(tau, wc_convolve(f, g));
  return wc_density(theta, f) * wc_density(CircAngle(tau.value() - theta.value()), g) / h;
}

double pushforward_density(std::complex<double> w, const EwcParams& p, const MobiusMap& m) {
  const MobiusMap inv = m.inverse();
  const std::complex<double> z = on_circle(inv.apply(w));
  return ewc_density_complex(z, DiskPoint(p.phi1()), DiskPoint(p.phi2())) * std::abs(inv.derivative(w));
}

NonClosureReport non_closure_gap(const EwcParams& p, const MobiusMap& m) {
  const auto moment_of_image = [&](int n) {
    return periodic_trapezoid_adaptive(
               [&](double t) {
                 const std::complex<double> z = std::polar(1.0, t);
                 return std::pow(on_circle(m.apply(z)), n) * ewc_density(CircAngle(t), p);
               },
               1e-14)
        .value;
  };
  const std::complex<double> target1 = moment_of_image(1);
  const std::complex<double> target2 = moment_of_image(2);

  const auto to_params = [](const std::vector<double>& x) {
    return EwcParams(x[0], x[1], sigmoid_radius(x[2]), sigmoid_radius(x[3]));
  };
  const auto mismatch = [&](const std::vector<double>& x) {
    const EwcParams q = to_params(x);
    return std::norm(first_moment(q) - target1) + std::norm(trig_moment(2, q).value - target2);
  };

  NelderMeadOptions options;
  options.max_evaluations = 6000;
  options.f_tolerance = 1e-28;
  options.x_tolerance = 1e-12;
  options.initial_step = 0.5;
  NelderMeadResult best{{}, std::numeric_limits<double>::infinity(), 0, false};
  const std::array<double, 4> angles{-2.5, -0.8, 0.8, 2.5};
  for (double a1 : angles) {
    for (double a2 : angles) {
      for (double t : {-1.0, 1.0}) {
        auto result = nelder_mead(mismatch, {a1, a2, t, -t}, options);
        // Restart from the optimum until the simplex stops improving.
        for (int restart = 0; restart < 3; ++restart) {
          options.initial_step = 0.05;
          auto refined = nelder_mead(mismatch, result.x, options);
          if (refined.value >= result.value) break;
          result = refined;
        }
        options.initial_step = 0.5;
        if (result.value < best.value) best = result;
      }
    }
  }

  const EwcParams matched = to_params(best.x);
  double gap = 0.0;
  constexpr int kGrid = 2048;
  for (int k = 0; k < kGrid; ++k) {
    const double t = -kPi + kTwoPi * k / kGrid;
    const double image = pushforward_density(std::polar(1.0, t), p, m);
    gap = std::max(gap, std::abs(image - ewc_density(CircAngle(t), matched)));
  }
  const double residual = std::abs(first_moment(matched) - target1) + std::abs(trig_moment(2, matched).value - target2);
  return {matched, residual, gap};
}

}  // namespace ewc::mobius
