#include "ewc/core.hpp"

#include <cmath>
#include <string>

#include "ewc/error.hpp"

namespace ewc {

double normalize_angle(double x) {
  if (!std::isfinite(x)) throw DomainError("angle must be finite");
  if (x >= -kPi && x < kPi) return x;
  double r = std::fmod(x, kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  if (r < -kPi) r += kTwoPi;
  // fmod near +-pi can round onto the excluded endpoint.
  if (r >= kPi || r < -kPi) r = -kPi;
  return r;
}

DiskPoint::DiskPoint(double re, double im) : z_(re, im) {
  if (!std::isfinite(re) || !std::isfinite(im) || std::norm(z_) >= 1.0) {
    throw DomainError("disk point must satisfy |z| < 1");
  }
}

DiskPoint DiskPoint::from_polar(double rho, double mu) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("disk point radius must lie in [0, 1)");
  return DiskPoint(std::polar(rho, mu));
}

WcParams::WcParams(double mu_, double rho_) : mu(mu_), rho(rho_) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("wrapped Cauchy rho must lie in [0, 1)");
}

EwcParams::EwcParams(double mu1, double mu2, double rho1, double rho2)
    : mu1_(mu1), mu2_(mu2), rho1_(rho1), rho2_(rho2) {
  if (!(rho1 >= 0.0 && rho1 < 1.0) || !(rho2 >= 0.0 && rho2 < 1.0)) {
    throw DomainError("EWC rho1 and rho2 must lie in [0, 1)");
  }
}

EwcParams EwcParams::from_complex(DiskPoint phi1, DiskPoint phi2) {
  const auto polar = [](DiskPoint p) {
    const double rho = std::hypot(p.re(), p.im());
    const double mu = rho > 0.0 ? std::atan2(p.im(), p.re()) : 0.0;
    return std::pair{mu, rho};
  };
  const auto [mu1, rho1] = polar(phi1);
  const auto [mu2, rho2] = polar(phi2);
  return {mu1, mu2, rho1, rho2};
}

EwcParams EwcParams::canonical() const {
  if (rho1_ < rho2_ || (rho1_ == rho2_ && mu1_.value() > mu2_.value())) return swapped();
  return *this;
}

double wc_kernel(double delta, double rho) {
  const double s = std::sin(0.5 * delta);
  const double one_minus = 1.0 - rho;
  return one_minus * one_minus + 4.0 * rho * s * s;
}

double wc_density(CircAngle theta, const WcParams& p) {
  return (1.0 - p.rho * p.rho) / (kTwoPi * wc_kernel(theta.value() - p.mu.value(), p.rho));
}

NormConstant normalizing_constant(const EwcParams& p) {
  const double r1 = p.rho1();
  const double r2 = p.rho2();
  const double rr = r1 * r2;
  const double cross = wc_kernel(p.mu1().value() - p.mu2().value(), rr);
  return {(1.0 - r1 * r1) * (1.0 - r2 * r2) * cross / (kTwoPi * (1.0 - rr * rr))};
}

double ewc_density(CircAngle theta, const EwcParams& p) {
  const double k1 = wc_kernel(theta.value() - p.mu1().value(), p.rho1());
  const double k2 = wc_kernel(theta.value() - p.mu2().value(), p.rho2());
  return normalizing_constant(p).value / (k1 * k2);
}

double ewc_density_complex(std::complex<double> z, DiskPoint phi1, DiskPoint phi2) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw DomainError("z must lie on the unit circle");
  const auto f1 = phi1.value();
  const auto f2 = phi2.value();
  const auto cross = f1 * std::conj(f2);
  const double lead = std::norm(1.0 - cross) / (1.0 - std::norm(cross));
  return lead * (1.0 - std::norm(f1)) / std::norm(z - f1) * (1.0 - std::norm(f2)) /
         std::norm(z - f2) / kTwoPi;
}

double log_density(CircAngle theta, const EwcParams& p) {
  const double r1 = p.rho1();
  const double r2 = p.rho2();
  const double rr = r1 * r2;
  const double log_c = std::log1p(-r1 * r1) + std::log1p(-r2 * r2) +
                       std::log(wc_kernel(p.mu1().value() - p.mu2().value(), rr)) -
                       std::log(kTwoPi) - std::log1p(-rr * rr);
  return log_c - std::log(wc_kernel(theta.value() - p.mu1().value(), r1)) -
         std::log(wc_kernel(theta.value() - p.mu2().value(), r2));
}

}  // namespace ewc
