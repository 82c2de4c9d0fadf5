#include "ewc/sphere.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

#include "ewc/error.hpp"
#include "ewc/quadrature.hpp"
#include "ewc/rng.hpp"

namespace ewc::sphere {
namespace {

double distance_sq(const UnitVector& x, double rho, const UnitVector& eta) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const double d = x[i] - rho * eta[i];
    s += d * d;
  }
  return s;
}

void require_same_dim(const UnitVector& a, const UnitVector& b) {
  if (a.dim() != b.dim()) throw DomainError("unit vectors must have matching dimension");
}

UnitVector draw_uniform(int d, Rng& rng) {
  std::vector<double> g(static_cast<std::size_t>(d));
  double norm_sq = 0.0;
  do {
    for (double& v : g) v = rng.normal();
    norm_sq = std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
  } while (norm_sq == 0.0);
  return UnitVector::normalized(std::move(g));
}

// One exact exit-distribution draw; returns the number of proposals used.
std::size_t draw_exit(double rho, const UnitVector& eta, Rng& rng, UnitVector& out) {
  const int d = eta.dim();
  const double floor_sq = (1.0 - rho) * (1.0 - rho);
  std::size_t proposals = 0;
  while (true) {
    UnitVector x = draw_uniform(d, rng);
    ++proposals;
    // f / (M u) = ((1 - rho)^2 / ||x - rho eta||^2)^{d/2}
    const double accept = std::pow(floor_sq / distance_sq(x, rho, eta), 0.5 * d);
    if (rng.uniform() < accept) {
      out = std::move(x);
      return proposals;
    }
  }
}

}  // namespace

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw DomainError("unit vectors need dimension d >= 2");
  const double norm = std::sqrt(std::inner_product(coords_.begin(), coords_.end(), coords_.begin(), 0.0));
  if (!(std::abs(norm - 1.0) <= 1e-12)) throw DomainError("unit vector must have norm 1 within 1e-12");
}

UnitVector UnitVector::normalized(std::vector<double> coords) {
  const double norm = std::sqrt(std::inner_product(coords.begin(), coords.end(), coords.begin(), 0.0));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
  for (double& v : coords) v /= norm;
  return UnitVector(std::move(coords));
}

double UnitVector::dot(const UnitVector& other) const {
  require_same_dim(*this, other);
  return std::inner_product(coords_.begin(), coords_.end(), other.coords_.begin(), 0.0);
}

SphereParams::SphereParams(double rho1_, UnitVector eta1_, double rho2_, UnitVector eta2_)
    : rho1(rho1_), eta1(std::move(eta1_)), rho2(rho2_), eta2(std::move(eta2_)) {
  if (!(rho1 >= 0.0 && rho1 < 1.0) || !(rho2 >= 0.0 && rho2 < 1.0)) {
    throw DomainError("sphere rho1 and rho2 must lie in [0, 1)");
  }
  require_same_dim(eta1, eta2);
}

double surface_area(int d) {
  if (d < 2) throw DomainError("surface area requires d >= 2");
  const double half = 0.5 * d;
  return 2.0 * std::exp(half * std::log(kPi) - std::lgamma(half));
}

double exit_density(const UnitVector& x, double rho1, const UnitVector& eta1) {
  require_same_dim(x, eta1);
  if (!(rho1 >= 0.0 && rho1 < 1.0)) throw DomainError("rho1 must lie in [0, 1)");
  const int d = x.dim();
  return (1.0 - rho1 * rho1) / std::pow(distance_sq(x, rho1, eta1), 0.5 * d) / surface_area(d);
}

double sphere_density(const UnitVector& x, const SphereParams& p) {
  require_same_dim(x, p.eta1);
  const int d = x.dim();
  const double half = 0.5 * d;
  const double rr = p.rho1 * p.rho2;
  const double lead = std::pow(1.0 + rr * rr - 2.0 * rr * p.eta1.dot(p.eta2), half) / (1.0 - rr * rr);
  return lead * (1.0 - p.rho1 * p.rho1) / std::pow(distance_sq(x, p.rho1, p.eta1), half) *
         (1.0 - p.rho2 * p.rho2) / std::pow(distance_sq(x, p.rho2, p.eta2), half) / surface_area(d);
}

std::vector<UnitVector> sample_uniform_sphere(int d, std::size_t n, std::uint64_t seed) {
  if (d < 2) throw DomainError("sphere dimension must be at least 2");
  Rng rng(seed);
  std::vector<UnitVector> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) points.push_back(draw_uniform(d, rng));
  return points;
}

SphereSample sample_exit(double rho1, const UnitVector& eta1, std::size_t n, std::uint64_t seed) {
  if (!(rho1 >= 0.0 && rho1 < 1.0)) throw DomainError("rho1 must lie in [0, 1)");
  Rng rng(seed);
  SphereSample sample;
  sample.points.reserve(n);
  std::size_t proposals = 0;
  UnitVector x = eta1;
  for (std::size_t i = 0; i < n; ++i) {
    proposals += draw_exit(rho1, eta1, rng, x);
    sample.points.push_back(x);
  }
  sample.diagnostics.proposals = proposals;
  sample.diagnostics.accepted = n;
  if (proposals > 0) sample.diagnostics.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
  return sample;
}

SphereSample sample_sphere_mcmc(const SphereParams& p, std::size_t n, const McmcConfig& cfg, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be positive");
  cfg.validate();
  const int d = p.dim();
  const auto chains = static_cast<std::size_t>(cfg.chain_count);
  const std::size_t per_chain = (n + chains - 1) / chains;
  // Likelihood of observing eta1 is proportional to ||eta1 - rho1 xi||^{-d}.
  const auto log_likelihood = [&](const UnitVector& xi) { return -0.5 * d * std::log(distance_sq(xi, p.rho1, p.eta1)); };

  SphereSample sample;
  sample.points.reserve(per_chain * chains);
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  for (std::size_t chain = 0; chain < chains; ++chain) {
    Rng rng(seed, chain);
    UnitVector xi = p.eta2;
    draw_exit(p.rho2, p.eta2, rng, xi);
    double current = log_likelihood(xi);
    const std::size_t total = static_cast<std::size_t>(cfg.burn_in) + per_chain * static_cast<std::size_t>(cfg.thin);
    UnitVector candidate = xi;
    for (std::size_t step = 1; step <= total; ++step) {
      draw_exit(p.rho2, p.eta2, rng, candidate);
      const double proposed = log_likelihood(candidate);
      ++proposals;
      if (std::log(rng.uniform()) < proposed - current) {
        xi = candidate;
        current = proposed;
        ++accepted;
      }
      if (step > static_cast<std::size_t>(cfg.burn_in) &&
          (step - static_cast<std::size_t>(cfg.burn_in)) % static_cast<std::size_t>(cfg.thin) == 0) {
        sample.points.push_back(xi);
      }
    }
  }
  sample.points.resize(n, p.eta1);
  sample.diagnostics.proposals = proposals;
  sample.diagnostics.accepted = accepted;
  sample.diagnostics.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposals);
  return sample;
}

MonteCarloEstimate sphere_integral_mc(int d, const std::function<double(const UnitVector&)>& f, std::size_t n,
                                      std::uint64_t seed) {
  if (n < 2) throw DomainError("Monte Carlo integral needs at least two points");
  Rng rng(seed);
  const double area = surface_area(d);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = area * f(draw_uniform(d, rng));
    sum += v;
    sum_sq += v * v;
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
  return {mean, std::sqrt(var / dn)};
}

double sphere_integral_d3(const std::function<double(const UnitVector&)>& f, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const auto ring = [&](double polar) {
    const double s = std::sin(polar);
    const double c = std::cos(polar);
    const auto around = periodic_trapezoid_adaptive(
        [&](double az) { return f(UnitVector::normalized({s * std::cos(az), s * std::sin(az), c})); }, tol, 32);
    return around.value * s;
  };
  return gauss_kronrod<double, 61>::integrate(ring, 0.0, kPi, 15, tol);
}

}  // namespace ewc::sphere
