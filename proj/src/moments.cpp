#include "ewc/moments.hpp"

#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <limits>

#include "ewc/error.hpp"
#include "ewc/probability.hpp"

namespace ewc {
namespace {

constexpr double kQuadPrecisionSeparation = 1e-3;

}  // namespace

TrigMoment trig_moment(int n, const EwcParams& p) {
  if (n < 0) throw DomainError("moment order must be nonnegative");
  if (n == 0) return {0, {1.0, 0.0}};
  const std::complex<double> f1 = p.phi1();
  const std::complex<double> f2 = p.phi2();
  const double a1 = std::norm(f1);
  const double a2 = std::norm(f2);
  if (std::abs(f1 - f2) < kEqualParamThreshold) {
    const double dn = n;
    return {n, (1.0 + dn + (1.0 - dn) * a1) / (1.0 + a1) * std::pow(f1, n)};
  }
  if (std::abs(f1 - f2) < kQuadPrecisionSeparation) {
    // The numerator cancels to O(|phi1 - phi2|); evaluate it in quad precision.
    using Complex = boost::multiprecision::cpp_complex_quad;
    const Complex q1(f1.real(), f1.imag());
    const Complex q2(f2.real(), f2.imag());
    const auto sq = [](const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); };
    const auto power = [](const Complex& z, int k) {
      Complex r(1);
      for (int i = 0; i < k; ++i) r *= z;
      return r;
    };
    const Complex num = (1 - sq(q2)) * (1 - conj(q1) * q2) * power(q1, n + 1) -
                        (1 - sq(q1)) * (1 - q1 * conj(q2)) * power(q2, n + 1);
    const Complex value = num / ((q1 - q2) * (1 - sq(q1 * conj(q2))));
    return {n, {static_cast<double>(value.real()), static_cast<double>(value.imag())}};
  }
  const std::complex<double> num = (1.0 - a2) * (1.0 - std::conj(f1) * f2) * std::pow(f1, n + 1) -
                                   (1.0 - a1) * (1.0 - f1 * std::conj(f2)) * std::pow(f2, n + 1);
  const double den_real = 1.0 - std::norm(f1 * std::conj(f2));
  return {n, num / ((f1 - f2) * den_real)};
}

std::complex<double> first_moment(const EwcParams& p) {
  const std::complex<double> f1 = p.phi1();
  const std::complex<double> f2 = p.phi2();
  const double a1 = std::norm(f1);
  const double a2 = std::norm(f2);
  return ((1.0 - a2) * f1 + (1.0 - a1) * f2) / (1.0 - a1 * a2);
}

double skewness(const EwcParams& p) {
  const std::complex<double> f1 = p.phi1();
  const std::complex<double> f2 = p.phi2();
  const double delta = std::abs(first_moment(p));
  if (delta < kUndefinedMeanThreshold) throw UndefinedMeanError("skewness requires E(Z) != 0");

  const std::complex<double> w = f1 * std::conj(f2);
  const double a1 = std::norm(f1);
  const double a2 = std::norm(f2);
  const double one_minus_w = 1.0 - std::norm(w);
  const double core = w.imag() * (a1 - a2) * (1.0 - a1) * (1.0 - a2);
  if (core == 0.0) return 0.0;
  const double lead = std::norm(1.0 - w) / (one_minus_w * one_minus_w * one_minus_w);
  const double s = lead * core / (delta * delta * std::pow(1.0 - delta, 1.5));
  if (!std::isfinite(s)) return std::copysign(std::numeric_limits<double>::infinity(), core);
  return s;
}

double skewness_from_moments(const EwcParams& p) {
  const std::complex<double> m1 = first_moment(p);
  const double delta = std::abs(m1);
  if (delta < kUndefinedMeanThreshold) throw UndefinedMeanError("skewness requires E(Z) != 0");
  const std::complex<double> m2 = trig_moment(2, p).value;
  const std::complex<double> unit = std::conj(m1) / delta;
  return (m2 * unit * unit).imag() / std::pow(1.0 - delta, 1.5);
}

CircularSummary circular_summary(const EwcParams& p) {
  const std::complex<double> m1 = first_moment(p);
  const double delta = std::abs(m1);
  if (delta < kUndefinedMeanThreshold) return {std::nullopt, delta, std::nullopt};
  return {CircAngle(std::arg(m1)), delta, skewness(p)};
}

QuadratureResult<std::complex<double>> moment_oracle(int n, const EwcParams& p) {
  if (n < 0) throw DomainError("moment order must be nonnegative");
  const double dn = n;
  return periodic_trapezoid_adaptive(
      [&](double t) { return std::polar(ewc_density(CircAngle(t), p), dn * t); }, 1e-13);
}

}  // namespace ewc
