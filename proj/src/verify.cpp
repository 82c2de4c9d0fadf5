#include "ewc/verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>

#include "ewc/brownian.hpp"
#include "ewc/error.hpp"
#include "ewc/fit.hpp"
#include "ewc/mobius.hpp"
#include "ewc/moments.hpp"
#include "ewc/probability.hpp"
#include "ewc/quadrature.hpp"
#include "ewc/rng.hpp"
#include "ewc/sampling.hpp"
#include "ewc/shape.hpp"
#include "ewc/sphere.hpp"
#include "ewc/stats.hpp"

namespace ewc::verify {
namespace {

using Results = std::vector<PropertyResult>;

EwcParams random_params(Rng& rng, double rho_max = 0.95) {
  return {kPi * (2 * rng.uniform() - 1), kPi * (2 * rng.uniform() - 1), rho_max * rng.uniform(),
          rho_max * rng.uniform()};
}

void below(Results& out, const std::string& suite, const std::string& name, double measured, double threshold) {
  out.push_back({suite, name, measured < threshold, measured, threshold});
}

void above(Results& out, const std::string& suite, const std::string& name, double measured, double threshold) {
  out.push_back({suite, name, measured > threshold, measured, threshold});
}

double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-12);
}

void core_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 1);
  double norm_err = 0.0, swap_err = 0.0, log_err = 0.0;
  for (int k = 0; k < 30; ++k) {
    const EwcParams p = random_params(rng);
    const auto total = periodic_trapezoid_adaptive([&](double t) { return ewc_density(CircAngle(t), p); });
    norm_err = std::max(norm_err, std::abs(total.value - 1.0));
    const CircAngle t(kPi * (2 * rng.uniform() - 1));
    const double f = ewc_density(t, p);
    swap_err = std::max(swap_err, std::abs(f - ewc_density(t, p.swapped())) / f);
    log_err = std::max(log_err, std::abs(log_density(t, p) - std::log(f)));
  }
  below(out, "core", "normalization", norm_err, 1e-10);
  below(out, "core", "label_exchange", swap_err, 1e-13);
  below(out, "core", "log_density", log_err, 1e-12);
}

void probability_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 2);
  double err = 0.0, add_err = 0.0;
  for (int k = 0; k < 60; ++k) {
    EwcParams p = random_params(rng);
    if (k % 4 == 0) p = EwcParams(p.mu1().value(), p.mu1().value(), p.rho1(), p.rho1());
    double a = kPi * (2 * rng.uniform() - 1), b = kPi * (2 * rng.uniform() - 1);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    const double exact = quad([&](double t) { return ewc_density(CircAngle(t), p); }, a, b);
    err = std::max(err, std::abs(interval_probability(a, b, p) - exact));
    const double c = 0.5 * (a + b);
    add_err = std::max(add_err, std::abs(interval_probability(a, c, p) + interval_probability(c, b, p) -
                                         interval_probability(a, b, p)));
  }
  below(out, "probability", "interval_vs_quadrature", err, 1e-9);
  below(out, "probability", "additivity", add_err, 1e-12);
}

void moments_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 3);
  double err = 0.0, skew_err = 0.0, locus = 0.0;
  for (int k = 0; k < 20; ++k) {
    EwcParams p = random_params(rng);
    if (k % 5 == 0) p = EwcParams(p.mu1().value(), p.mu1().value(), p.rho1(), p.rho1());
    for (int n = 0; n <= 6; ++n)
      err = std::max(err, std::abs(trig_moment(n, p).value - moment_oracle(n, p).value));
    if (std::abs(first_moment(p)) > 1e-6)
      skew_err = std::max(skew_err, std::abs(skewness(p) - skewness_from_moments(p)));
    const double mu = p.mu1().value(), r = p.rho1();
    locus = std::max(locus, std::abs(first_moment(EwcParams(mu, mu + kPi, r, r))));
  }
  below(out, "moments", "trig_moment_vs_quadrature", err, 1e-10);
  below(out, "moments", "skewness_closed_form", skew_err, 1e-10);
  below(out, "moments", "zero_mean_locus", locus, 1e-14);
}

int grid_mode_count(const EwcParams& p, int grid) {
  std::vector<double> f(grid);
  for (int i = 0; i < grid; ++i) f[i] = ewc_density(CircAngle(-kPi + kTwoPi * i / grid), p);
  int modes = 0;
  for (int i = 0; i < grid; ++i)
    if (f[i] > f[(i + grid - 1) % grid] && f[i] >= f[(i + 1) % grid]) ++modes;
  return modes;
}

void shape_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 4);
  int checked = 0, mismatched = 0;
  for (int k = 0; k < 200; ++k) {
    const EwcParams p = random_params(rng, 0.9);
    const ModalityReport r = modality(p);
    if (std::abs(r.discriminant) < 1e-6) continue;
    ++checked;
    const int expected = r.classification == Modality::bimodal ? 2 : 1;
    if (grid_mode_count(p, 20000) != expected) ++mismatched;
  }
  below(out, "shape", "discriminant_vs_grid_mismatches", mismatched, 0.5);
  above(out, "shape", "discriminant_vs_grid_checked", checked, 100);

  // Bisection on the discriminant sign at dmu = 2pi/3, rho1 = rho2.
  const auto disc = [](double rho) {
    return quartic_discriminant(tan_half_quartic(stationary_coeffs(EwcParams(2 * kPi / 3, 0.0, rho, rho))));
  };
  double lo = 0.05, hi = 0.6;
  const bool lo_sign = disc(lo) > 0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((disc(mid) > 0) == lo_sign ? lo : hi) = mid;
  }
  below(out, "shape", "threshold_2_minus_sqrt3", std::abs(0.5 * (lo + hi) - (2 - std::sqrt(3.0))), 1e-6);
}

void sampling_suite(Results& out, std::uint64_t seed) {
  const EwcParams p(0.0, kPi / 2, 2.0 / 3, 1.0 / 3);
  const std::size_t n = 5000;
  const auto rej = sample_ewc_rejection(p, n, seed);
  const auto inv = sample_ewc_invcdf(p, n, seed + 1);
  const auto mc = sample_ewc_mcmc(p, n, McmcConfig{}, seed + 2);
  const double ne = n / 2.0;
  above(out, "sampling", "ks_rejection_vs_invcdf_p",
        ks_pvalue(ks_statistic_two_sample(rej.angles, inv.angles), ne), 0.01);
  above(out, "sampling", "ks_rejection_vs_mcmc_p", ks_pvalue(ks_statistic_two_sample(rej.angles, mc.angles), ne),
        0.01);
  const std::complex<double> m1 = first_moment(p);
  const std::complex<double> emp = empirical_moment(rej.angles, 1);
  below(out, "sampling", "first_moment_z", std::abs(emp - m1) / std::sqrt(1.0 / n), 4.0);
  double inv_err = 0.0;
  for (double u : {0.01, 0.2, 0.5, 0.8, 0.99}) inv_err = std::max(inv_err, std::abs(cdf(CircAngle(ewc_inverse_cdf(u, p)), p) - u));
  below(out, "sampling", "inverse_cdf_roundtrip", inv_err, 1e-11);
}

void mobius_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 5);
  double w2 = 0.0, w1 = 0.0, spread = 0.0;
  for (int k = 0; k < 200; ++k) {
    const EwcParams p = random_params(rng);
    const mobius::MobiusMap m(std::polar(1.0, kTwoPi * rng.uniform()),
                              DiskPoint::from_polar(0.9 * rng.uniform(), kTwoPi * rng.uniform()));
    const std::complex<double> z = std::polar(1.0, kTwoPi * rng.uniform());
    w2 = std::max(w2, mobius::kernel_invariance_residual(z, p, m));
    const double r0 = mobius::invariance_ratio(z, p, m);
    const double r1 = mobius::invariance_ratio(std::polar(1.0, kTwoPi * rng.uniform()), p, m);
    spread = std::max(spread, std::abs(r1 - r0) / r0);
    w1 = std::max(w1, mobius::wc_weight1_residual(z, DiskPoint(p.phi1()), m));
  }
  below(out, "mobius", "weight2_kernel_identity", w2, 1e-11);
  below(out, "mobius", "weight2_ratio_constant_in_z", spread, 1e-11);
  below(out, "mobius", "wc_weight1_identity", w1, 1e-11);
  double harm = 0.0;
  const DiskPoint phi = DiskPoint::from_polar(0.7, 0.4);
  harm = std::max(harm, mobius::poisson_integral_check(mobius::Harmonic::constant, 0, phi));
  for (int k = 1; k <= 6; ++k) {
    harm = std::max(harm, mobius::poisson_integral_check(mobius::Harmonic::real_power, k, phi));
    harm = std::max(harm, mobius::poisson_integral_check(mobius::Harmonic::imag_power, k, phi));
  }
  below(out, "mobius", "poisson_harmonic", harm, 1e-10);
}

void sphere_suite(Results& out, std::uint64_t seed) {
  Rng rng(seed, 6);
  double red = 0.0;
  for (int k = 0; k < 50; ++k) {
    const EwcParams p = random_params(rng);
    const double t = kPi * (2 * rng.uniform() - 1);
    const sphere::SphereParams sp(p.rho1(), sphere::UnitVector({std::cos(p.mu1().value()), std::sin(p.mu1().value())}),
                                  p.rho2(), sphere::UnitVector({std::cos(p.mu2().value()), std::sin(p.mu2().value())}));
    const double f = ewc_density(CircAngle(t), p);
    red = std::max(red, std::abs(sphere::sphere_density(sphere::UnitVector({std::cos(t), std::sin(t)}), sp) - f) / f);
  }
  below(out, "sphere", "d2_reduction", red, 1e-13);
  const sphere::SphereParams s3(0.6, sphere::UnitVector({0, 0, 1}), 0.4, sphere::UnitVector::normalized({1, 1, 0}));
  below(out, "sphere", "d3_normalization",
        std::abs(sphere::sphere_integral_d3([&](const sphere::UnitVector& x) { return sphere::sphere_density(x, s3); }) -
                 1.0),
        1e-8);
}

void fit_suite(Results& out, std::uint64_t seed) {
  const EwcParams truth(0.0, kPi / 2, 2.0 / 3, 1.0 / 3);
  const fit::Dataset data(sample_ewc_rejection(truth, 4000, seed).angles);
  const fit::FitResult r = fit::fit_ewc(data);
  const double true_ll = fit::loglik(data, truth);
  above(out, "fit", "loglik_gain_over_truth", r.loglik - true_ll, -1e-6 * data.size());
  const WcParams wc = fit::fit_wc(data);
  const double wc_ll = fit::loglik(data, EwcParams(wc.mu.value(), 0.0, wc.rho, 0.0));
  above(out, "fit", "nesting_over_wc", r.loglik - wc_ll, -1e-9);
  double err = 0.0;
  const EwcParams c = truth.canonical();
  err = std::max({std::abs(angle_diff(r.params.mu1().value(), c.mu1().value())), std::abs(angle_diff(r.params.mu2().value(), c.mu2().value())),
                  std::abs(r.params.rho1() - c.rho1()), std::abs(r.params.rho2() - c.rho2())});
  below(out, "fit", "recovery_max_coordinate_error", err, 0.15);
}

void oracle_suite(Results& out, std::uint64_t seed) {
  const EwcParams p(0.0, kPi / 2, 2.0 / 3, 1.0 / 3);
  const auto r = oracle::conditional_equal_sample(p, 20000, 0.05, seed);
  below(out, "oracle", "equal_conditioning_l1", r.report.l1_distance, 0.08);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core",   "probability", "moments", "shape", "sampling",
                                              "mobius", "sphere",      "fit",     "oracle"};
  return names;
}

std::vector<PropertyResult> run_suite(const std::string& suite, std::uint64_t seed) {
  using Runner = void (*)(Results&, std::uint64_t);
  static const std::vector<std::pair<std::string, Runner>> runners{
      {"core", core_suite},     {"probability", probability_suite}, {"moments", moments_suite},
      {"shape", shape_suite},   {"sampling", sampling_suite},       {"mobius", mobius_suite},
      {"sphere", sphere_suite}, {"fit", fit_suite},                 {"oracle", oracle_suite}};
  Results out;
  bool found = false;
  for (const auto& [name, run] : runners) {
    if (suite == "all" || suite == name) {
      run(out, seed);
      found = true;
    }
  }
  if (!found) throw DomainError("unknown suite: " + suite);
  return out;
}

}  // namespace ewc::verify
