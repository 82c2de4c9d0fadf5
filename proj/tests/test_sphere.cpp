#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ewc/error.hpp"
#include "ewc/rng.hpp"
#include "ewc/sampling.hpp"
#include "ewc/sphere.hpp"
#include "ewc/stats.hpp"
#include "oracles.hpp"

using namespace ewc;
using namespace ewc::sphere;

namespace {

UnitVector random_unit(int d, Rng& rng) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.normal();
  return UnitVector::normalized(v);
}

UnitVector circle_point(double t) { return UnitVector({std::cos(t), std::sin(t)}); }

SphereParams random_sphere_params(int d, Rng& rng) {
  return {0.9 * rng.uniform(), random_unit(d, rng), 0.9 * rng.uniform(), random_unit(d, rng)};
}

// Random rotation as a product of Givens rotations.
std::vector<double> rotate(std::vector<double> x, const std::vector<std::pair<int, double>>& givens) {
  const int d = static_cast<int>(x.size());
  for (const auto& [k, a] : givens) {
    const int i = k % d, j = (k / d) % d;
    if (i == j) continue;
    const double xi = x[i], xj = x[j];
    x[i] = std::cos(a) * xi - std::sin(a) * xj;
    x[j] = std::sin(a) * xi + std::cos(a) * xj;
  }
  return x;
}

std::vector<double> as_vec(const UnitVector& u) { return {u.coords().begin(), u.coords().end()}; }

double angle_of(const UnitVector& u) { return std::atan2(u[1], u[0]); }

std::vector<double> angles_of(const std::vector<UnitVector>& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(normalize_angle(angle_of(p)));
  return v;
}

double ks2_p(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = a.size(), nb = b.size();
  return ks_pvalue(ks_statistic_two_sample(a, b), na * nb / (na + nb));
}

// E(x' eta) under the exit law: integrate t against the density of t = x' eta,
// which carries the slice area A_{d-2} (1 - t^2)^{(d-3)/2}.
double exit_mean_projection(int d, double rho) {
  const double slice = surface_area(d - 1);
  return test::gk(
      [&](double t) {
        return t * (1 - rho * rho) / std::pow(1 + rho * rho - 2 * rho * t, d / 2.0) * slice *
               std::pow(1 - t * t, (d - 3) / 2.0) / surface_area(d);
      },
      -1, 1);
}

}  // namespace

TEST(Sphere, SurfaceArea) {
  EXPECT_NEAR(surface_area(2), kTwoPi, 1e-14);
  EXPECT_NEAR(surface_area(3), 4 * kPi, 1e-14);
  EXPECT_NEAR(surface_area(4), 2 * kPi * kPi, 1e-13);
  EXPECT_NEAR(surface_area(5), 8 * kPi * kPi / 3, 1e-13);
  EXPECT_NEAR(surface_area(6), kPi * kPi * kPi, 1e-12);
  EXPECT_THROW(surface_area(1), DomainError);
}

TEST(Sphere, UnitVectorValidation) {
  EXPECT_THROW(UnitVector({1.0}), DomainError);
  EXPECT_THROW(UnitVector({1.0, 1e-5}), DomainError);
  EXPECT_THROW(UnitVector::normalized({0.0, 0.0}), DomainError);
  EXPECT_NEAR(UnitVector::normalized({3.0, 4.0})[1], 0.8, 1e-16);
  EXPECT_THROW(SphereParams(0.5, UnitVector({1.0, 0.0}), 0.5, UnitVector({1.0, 0.0, 0.0})), DomainError);
  EXPECT_THROW(SphereParams(1.0, UnitVector({1.0, 0.0}), 0.5, UnitVector({1.0, 0.0})), DomainError);
}

TEST(Sphere, ExitDensityReductions) {
  const UnitVector e({0.0, 0.0, 1.0});
  EXPECT_NEAR(exit_density(UnitVector({1.0, 0.0, 0.0}), 0.0, e), 1 / (4 * kPi), 1e-16);
  for (double t = -3.1; t < 3.1; t += 0.3) {
    const double f = exit_density(circle_point(t), 0.6, circle_point(0.4));
    EXPECT_NEAR(f, wc_density(CircAngle(t), WcParams(0.4, 0.6)), 1e-14 * f);
  }
}

TEST(Sphere, PlanarReductionMatchesCircularDensity) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const EwcParams p = test::random_params(rng);
    const SphereParams s(p.rho1(), circle_point(p.mu1().value()), p.rho2(), circle_point(p.mu2().value()));
    for (double t = -3.0; t < 3.1; t += 0.5) {
      const double f = ewc_density(CircAngle(t), p);
      EXPECT_NEAR(sphere_density(circle_point(t), s), f, 1e-13 * f);
    }
  }
}

TEST(Sphere, SpecialCases) {
  Rng rng(2);
  for (int d : {3, 4, 6}) {
    const UnitVector eta1 = random_unit(d, rng), eta2 = random_unit(d, rng);
    for (int k = 0; k < 10; ++k) {
      const UnitVector x = random_unit(d, rng);
      const double e = exit_density(x, 0.7, eta1);
      EXPECT_NEAR(sphere_density(x, SphereParams(0.7, eta1, 0.0, eta2)), e, 1e-13 * e);
      const double r = 0.6;
      double dist2 = 0;
      for (int i = 0; i < d; ++i) dist2 += (x[i] - r * eta1[i]) * (x[i] - r * eta1[i]);
      const double eq13 = std::pow(1 - r * r, d + 1) / (1 + r * r) * std::pow(dist2, -d) / surface_area(d);
      EXPECT_NEAR(sphere_density(x, SphereParams(r, eta1, r, eta1)), eq13, 1e-12 * eq13);
    }
  }
}

TEST(Sphere, RotationAndExchangeInvariance) {
  Rng rng(3);
  for (int d : {2, 3, 5}) {
    for (int k = 0; k < 20; ++k) {
      const SphereParams p = random_sphere_params(d, rng);
      const UnitVector x = random_unit(d, rng);
      std::vector<std::pair<int, double>> g;
      for (int i = 0; i < 3 * d; ++i) g.emplace_back(static_cast<int>(rng.next_u64() % (d * d)), kTwoPi * rng.uniform());
      const SphereParams rp(p.rho1, UnitVector::normalized(rotate(as_vec(p.eta1), g)), p.rho2,
                            UnitVector::normalized(rotate(as_vec(p.eta2), g)));
      const double f = sphere_density(x, p);
      EXPECT_NEAR(sphere_density(UnitVector::normalized(rotate(as_vec(x), g)), rp), f, 1e-12 * f);
      EXPECT_NEAR(sphere_density(x, SphereParams(p.rho2, p.eta2, p.rho1, p.eta1)), f, 1e-13 * f);
    }
  }
}

TEST(Sphere, MonteCarloNormalization) {
  Rng rng(4);
  const UnitVector pole3({0.0, 0.0, 1.0});
  const auto exit_mc = sphere_integral_mc(3, [&](const UnitVector& x) { return exit_density(x, 0.5, pole3); }, 1000000, 5);
  EXPECT_LT(std::abs(exit_mc.mean - 1), 3 * exit_mc.standard_error);
  for (int d : {2, 3, 4, 6}) {
    for (int k = 0; k < 3; ++k) {
      const SphereParams p = random_sphere_params(d, rng);
      const auto mc = sphere_integral_mc(d, [&](const UnitVector& x) { return sphere_density(x, p); }, 400000, 10 * d + k);
      EXPECT_LT(std::abs(mc.mean - 1), 3 * mc.standard_error) << d << " " << k;
    }
  }
}

TEST(Sphere, ProductRuleNormalization) {
  EXPECT_NEAR(sphere_integral_d3([](const UnitVector&) { return 1.0; }), 4 * kPi, 1e-12);
  EXPECT_NEAR(sphere_integral_d3([](const UnitVector& x) { return x[0] * x[0]; }), 4 * kPi / 3, 1e-12);
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    const SphereParams p = random_sphere_params(3, rng);
    EXPECT_NEAR(sphere_integral_d3([&](const UnitVector& x) { return sphere_density(x, p); }), 1.0, 1e-8);
  }
}

TEST(Sphere, UniformSampler) {
  for (int d : {2, 3, 5}) {
    const std::size_t n = 100000;
    const auto pts = sample_uniform_sphere(d, n, 7);
    std::vector<double> mean(d, 0.0);
    for (const auto& x : pts)
      for (int i = 0; i < d; ++i) mean[i] += x[i] / n;
    double norm = 0;
    for (double m : mean) {
      EXPECT_LT(std::abs(m), 4 / std::sqrt(double(n)));
      norm += m * m;
    }
    EXPECT_LT(std::sqrt(norm), 4 / std::sqrt(double(n)));
    if (d == 2) {
      const auto a = angles_of(pts);
      EXPECT_GT(ks_pvalue(ks_statistic(a, [](double t) { return (t + kPi) / kTwoPi; }), n), 0.01);
    }
  }
}

TEST(Sphere, ExitSampler) {
  const UnitVector e3({0.0, 0.0, 1.0});
  const auto flat = sample_exit(0.0, e3, 1000, 8);
  EXPECT_EQ(*flat.diagnostics.acceptance_rate, 1.0);

  const auto planar = sample_exit(0.5, circle_point(0.7), 10000, 9);
  const auto wc = sample_wc(WcParams(0.7, 0.5), 10000, 10);
  EXPECT_GT(ks2_p(angles_of(planar.points), wc.angles), 0.01);

  for (int d : {3, 4}) {
    Rng rng(11);
    const UnitVector eta = random_unit(d, rng);
    const double rho = 0.6;
    const std::size_t n = 100000;
    const auto s = sample_exit(rho, eta, n, 12);
    const double m = (1 + rho) / std::pow(1 - rho, d - 1);
    EXPECT_NEAR(*s.diagnostics.acceptance_rate, 1 / m, 3 / std::sqrt(double(s.diagnostics.proposals)));
    std::vector<double> mean(d, 0.0);
    double proj = 0, proj2 = 0;
    for (const auto& x : s.points) {
      const double t = x.dot(eta);
      proj += t / n;
      proj2 += t * t / n;
      for (int i = 0; i < d; ++i) mean[i] += x[i] / n;
    }
    const double se = std::sqrt((proj2 - proj * proj) / n);
    EXPECT_LT(std::abs(proj - exit_mean_projection(d, rho)), 3 * se) << d;
    // Orthogonal part of the mean vanishes.
    double perp2 = 0;
    for (int i = 0; i < d; ++i) perp2 += std::pow(mean[i] - proj * eta[i], 2);
    EXPECT_LT(std::sqrt(perp2), 5 / std::sqrt(double(n)));
  }
}

TEST(Sphere, McmcFlatLikelihood) {
  McmcConfig cfg;
  const UnitVector eta2({0.0, 1.0, 0.0});
  const auto s = sample_sphere_mcmc(SphereParams(0.0, UnitVector({1.0, 0.0, 0.0}), 0.5, eta2), 2000, cfg, 13);
  EXPECT_EQ(*s.diagnostics.acceptance_rate, 1.0);
  EXPECT_EQ(s.points.size(), 2000u);
}

TEST(Sphere, McmcPlanarMatchesCircularChain) {
  McmcConfig cfg;
  const EwcParams p(1.0, -0.8, 0.6, 0.45);
  const auto s = sample_sphere_mcmc(SphereParams(0.6, circle_point(1.0), 0.45, circle_point(-0.8)), 10000, cfg, 14);
  const auto c = sample_ewc_mcmc(p, 10000, cfg, 15);
  EXPECT_GT(ks2_p(angles_of(s.points), c.angles), 0.01);
}

TEST(Sphere, McmcMeanMatchesQuadrature) {
  McmcConfig cfg;
  const SphereParams p(0.7, UnitVector::normalized({1.0, 0.5, -0.2}), 0.5, UnitVector::normalized({-0.3, 1.0, 0.4}));
  const std::size_t n = 50000;
  const auto s = sample_sphere_mcmc(p, n, cfg, 16);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> series;
    for (const auto& x : s.points) series.push_back(x[i]);
    double m = 0, m2 = 0;
    for (double v : series) {
      m += v / n;
      m2 += v * v / n;
    }
    const double ess = std::min(double(n), effective_sample_size(series));
    const double se = std::sqrt((m2 - m * m) / ess);
    const double exact = sphere_integral_d3([&](const UnitVector& x) { return x[i] * sphere_density(x, p); });
    EXPECT_LT(std::abs(m - exact), 4 * se) << i;
  }
}

TEST(Sphere, SamplersAreDeterministic) {
  McmcConfig cfg;
  const SphereParams p(0.4, UnitVector({1.0, 0.0, 0.0}), 0.3, UnitVector({0.0, 0.0, 1.0}));
  const auto a = sample_sphere_mcmc(p, 100, cfg, 3), b = sample_sphere_mcmc(p, 100, cfg, 3);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(as_vec(a.points[k]), as_vec(b.points[k]));
}
