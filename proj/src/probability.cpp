#include "ewc/probability.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>

#include "ewc/error.hpp"

namespace ewc {
namespace {

constexpr double kEndpointNudge = 1e-12;

// Below this separation the general branch is evaluated in quad precision:
// its terms are O(|phi1 - phi2|) and cancel down to O(|phi1 - phi2|^2).
constexpr double kQuadPrecisionSeparation = 1e-3;

using Quad = boost::multiprecision::cpp_bin_float_quad;

// tan((theta - mu) / 2) is singular where theta - mu is an odd multiple of pi;
// such endpoints are moved toward the interval interior.
double nudge_endpoint(double endpoint, double mu, double toward) {
  const double half = 0.5 * (endpoint - mu);
  if (std::abs(std::cos(half)) < 1e-15) return endpoint + (toward > endpoint ? kEndpointNudge : -kEndpointNudge);
  return endpoint;
}

// arctan{(1 + rho)/(1 - rho) tan((theta - mu)/2)} over [a, b], plus the branch
// correction A_mu = pi when the tangent wraps inside the interval.
template <typename Real>
Real arctan_increment(double a, double b, double mu, double rho) {
  using std::atan;
  using std::tan;
  const Real lo = nudge_endpoint(a, mu, b);
  const Real hi = nudge_endpoint(b, mu, a);
  const Real r = rho;
  const Real ratio = (1 + r) / (1 - r);
  const Real ta = tan((lo - mu) / 2);
  const Real tb = tan((hi - mu) / 2);
  const Real wrap = ta > tb ? boost::math::constants::pi<Real>() : Real(0);
  return atan(ratio * tb) - atan(ratio * ta) + wrap;
}

template <typename Real>
Real kernel(Real delta, Real rho) {
  using std::sin;
  const Real s = sin(delta / 2);
  return (1 - rho) * (1 - rho) + 4 * rho * s * s;
}

template <typename Real>
double general_branch(double a, double b, const EwcParams& p) {
  using std::cos;
  using std::log;
  using std::sin;
  const Real r1 = p.rho1();
  const Real r2 = p.rho2();
  const Real m1 = p.mu1().value();
  const Real m2 = p.mu2().value();
  const Real dm = m1 - m2;
  const Real sin_half = sin(dm / 2);
  // D = |phi1 - phi2|^2 |1 - phi1 conj(phi2)|^2
  const Real sep = (r1 - r2) * (r1 - r2) + 4 * r1 * r2 * sin_half * sin_half;
  const Real d = sep * kernel(dm, Real(r1 * r2));

  const auto log_ratio = [&](double t) {
    const Real x = t;
    return log(kernel(Real(x - m2), r2)) - log(kernel(Real(x - m1), r1));
  };
  const Real log_term = r1 * r2 * sin(dm) * (log_ratio(b) - log_ratio(a));
  // r1(1 + r2^2) - r2(1 + r1^2) cos(dm), arranged to keep the leading cancellation exact
  const Real two_sin_sq = 2 * sin_half * sin_half;
  const Real n1 = (r1 - r2) * (1 - r1 * r2) + r2 * (1 + r1 * r1) * two_sin_sq;
  const Real n2 = (r2 - r1) * (1 - r1 * r2) + r1 * (1 + r2 * r2) * two_sin_sq;
  const Real w1 = 2 * r1 * n1 / (1 - r1 * r1);
  const Real w2 = 2 * r2 * n2 / (1 - r2 * r2);
  const Real atan1 = r1 > 0 ? arctan_increment<Real>(a, b, p.mu1().value(), p.rho1()) : Real(0);
  const Real atan2 = r2 > 0 ? arctan_increment<Real>(a, b, p.mu2().value(), p.rho2()) : Real(0);
  const Real c = normalizing_constant(p).value;
  return static_cast<double>(c / d * (log_term + w1 * atan1 + w2 * atan2));
}

double equal_branch(double a, double b, const EwcParams& p) {
  const double r = p.rho1();
  const double m = p.mu1().value();
  const double c = normalizing_constant(p).value;
  const double one_minus_sq = 1.0 - r * r;
  const auto rational = [&](double t) { return r * std::sin(t - m) / wc_kernel(t - m, r); };
  const double atan_part = r > 0.0 ? arctan_increment<double>(a, b, m, r) : 0.5 * (b - a);
  return 2.0 * c / (one_minus_sq * one_minus_sq) *
         (rational(b) - rational(a) + (1.0 + r * r) / one_minus_sq * atan_part);
}

}  // namespace

double interval_probability(double a, double b, const EwcParams& p) {
  if (!(a >= -kPi && b <= kPi && a < b)) {
    throw DomainError("interval_probability requires -pi <= a < b <= pi");
  }
  if (a == -kPi && b == kPi) return 1.0;
  // The right end of the circle is reached through the complement.
  if (b == kPi) return 1.0 - interval_probability(-kPi, a, p);

  const double separation = std::abs(p.phi1() - p.phi2());
  double prob;
  if (separation < kEqualParamThreshold) {
    prob = equal_branch(a, b, p);
  } else if (separation < kQuadPrecisionSeparation) {
    prob = general_branch<Quad>(a, b, p);
  } else {
    prob = general_branch<double>(a, b, p);
  }
  if (prob < 0.0) return 0.0;
  if (prob > 1.0) return 1.0;
  return prob;
}

double cdf(CircAngle theta, const EwcParams& p) {
  if (theta.value() == -kPi) return 0.0;
  return interval_probability(-kPi, theta.value(), p);
}

}  // namespace ewc
