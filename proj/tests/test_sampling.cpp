#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ewc/error.hpp"
#include "ewc/moments.hpp"
#include "ewc/probability.hpp"
#include "ewc/rng.hpp"
#include "ewc/sampling.hpp"
#include "ewc/shape.hpp"
#include "ewc/stats.hpp"

using namespace ewc;

namespace {

const EwcParams kGeneric(1.0, -0.8, 0.6, 0.45);

double cdf_of(const EwcParams& p, double t) { return cdf(CircAngle(t), p); }

// |empirical - exact| / SE for the real and imaginary parts of moment n.
// `ess_factor` scales n down for correlated draws.
double moment_z(const std::vector<double>& th, int n, std::complex<double> exact, double ess_factor = 1.0) {
  double sc = 0, ss = 0, sc2 = 0, ss2 = 0;
  for (double t : th) {
    const double c = std::cos(n * t), s = std::sin(n * t);
    sc += c;
    ss += s;
    sc2 += c * c;
    ss2 += s * s;
  }
  const double m = static_cast<double>(th.size());
  const double mc = sc / m, ms = ss / m;
  const double neff = m * ess_factor;
  const double se_c = std::sqrt((sc2 / m - mc * mc) / neff), se_s = std::sqrt((ss2 / m - ms * ms) / neff);
  return std::max(std::abs(mc - exact.real()) / se_c, std::abs(ms - exact.imag()) / se_s);
}

// Bin edges with equal probability, by bisection on the closed-form CDF.
std::vector<double> quantile_edges(const EwcParams& p, int bins) {
  std::vector<double> edges{-kPi};
  for (int k = 1; k < bins; ++k) {
    double lo = -kPi, hi = kPi;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cdf_of(p, mid) < static_cast<double>(k) / bins ? lo : hi) = mid;
    }
    edges.push_back(0.5 * (lo + hi));
  }
  edges.push_back(kPi);
  return edges;
}

double ks_p(const std::vector<double>& th, const EwcParams& p) {
  return ks_pvalue(ks_statistic(th, [&](double t) { return cdf_of(p, t); }), static_cast<double>(th.size()));
}

double ks2_p(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = a.size(), nb = b.size();
  return ks_pvalue(ks_statistic_two_sample(a, b), na * nb / (na + nb));
}

}  // namespace

TEST(SampleWc, UniformAndConcentrated) {
  const std::size_t n = 100000;
  const auto flat = sample_wc(WcParams(0.3, 0.0), n, 1);
  EXPECT_LT(std::abs(empirical_moment(flat.angles, 1)), 4 / std::sqrt(double(n)));
  const auto wc = sample_wc(WcParams(0.0, 0.5), n, 2);
  EXPECT_LT(std::abs(empirical_moment(wc.angles, 1) - 0.5), 3 / std::sqrt(double(n)));
  for (double t : wc.angles) {
    ASSERT_GE(t, -kPi);
    ASSERT_LT(t, kPi);
  }
  const EwcParams as_ewc(0.0, 0.0, 0.5, 0.0);
  EXPECT_LT(ks_statistic(wc.angles, [&](double t) { return cdf_of(as_ewc, t); }), 1.63 / std::sqrt(double(n)));
  EXPECT_THROW(sample_wc(WcParams(0, 0.5), 0, 1), DomainError);
}

TEST(SampleWc, InverseCdfFormula) {
  const WcParams p(0.7, 0.3);
  for (double u : {0.1, 0.5, 0.93}) {
    const double expected = 0.7 + 2 * std::atan((0.7 / 1.3) * std::tan(kPi * (u - 0.5)));
    EXPECT_NEAR(wc_inverse_cdf(u, p), normalize_angle(expected), 1e-15);
  }
}

TEST(Rejection, TrivialEnvelope) {
  const auto b = sample_ewc_rejection(EwcParams(0.4, 2.0, 0.7, 0.0), 5000, 3);
  EXPECT_EQ(b.diagnostics.proposals, 5000u);
  EXPECT_EQ(*b.diagnostics.acceptance_rate, 1.0);
}

TEST(Rejection, BoundIsTightAndAcceptanceMatches) {
  const EwcParams p = kGeneric;
  const double m = rejection_bound(p);
  // Bound attained at the envelope's peak: sup f_EWC / f_WC over a fine grid.
  double sup_a = 0, sup_b = 0;
  for (int i = 0; i < 200000; ++i) {
    const CircAngle t(-kPi + kTwoPi * i / 200000);
    sup_a = std::max(sup_a, ewc_density(t, p) / wc_density(t, WcParams(p.mu1().value(), p.rho1())));
    sup_b = std::max(sup_b, ewc_density(t, p) / wc_density(t, WcParams(p.mu2().value(), p.rho2())));
  }
  EXPECT_NEAR(m, std::min(sup_a, sup_b), 1e-6 * m);
  const auto b = sample_ewc_rejection(p, 100000, 4);
  const double rate = static_cast<double>(b.angles.size()) / b.diagnostics.proposals;
  EXPECT_NEAR(rate, 1 / m, 3 / std::sqrt(double(b.diagnostics.proposals)));
}

TEST(Rejection, MomentsAndChiSquare) {
  const EwcParams p = kGeneric;
  const auto b = sample_ewc_rejection(p, 100000, 5);
  EXPECT_LT(moment_z(b.angles, 1, trig_moment(1, p).value), 3.0);
  EXPECT_LT(moment_z(b.angles, 2, trig_moment(2, p).value), 3.0);
  const auto edges = quantile_edges(p, 50);
  std::vector<std::size_t> obs(50, 0);
  for (double t : b.angles) obs[std::upper_bound(edges.begin(), edges.end(), t) - edges.begin() - 1]++;
  const std::vector<double> expected(50, b.angles.size() / 50.0);
  EXPECT_GT(chi_square_test(obs, expected).pvalue, 0.01);
  EXPECT_GT(ks_p(b.angles, p), 0.01);
}

TEST(InvCdf, UniformIsLinear) {
  for (double u : {1e-6, 0.2, 0.5, 0.77, 1 - 1e-6})
    EXPECT_NEAR(ewc_inverse_cdf(u, EwcParams::uniform()), kTwoPi * (u - 0.5), 1e-11);
  EXPECT_THROW(ewc_inverse_cdf(0.0, kGeneric), DomainError);
  EXPECT_THROW(ewc_inverse_cdf(0.5, kGeneric, 1e-13), DomainError);
}

TEST(InvCdf, SolvesToToleranceAndIsMonotone) {
  const EwcParams p(2.5, -2.9, 0.9, 0.85);
  double prev = -kPi;
  for (int i = 1; i < 500; ++i) {
    const double u = i / 500.0;
    const double t = ewc_inverse_cdf(u, p);
    EXPECT_LT(std::abs(cdf_of(p, t) - u), 1e-12);
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(InvCdf, MatchesRejection) {
  const auto a = sample_ewc_invcdf(kGeneric, 10000, 6);
  const auto b = sample_ewc_rejection(kGeneric, 10000, 7);
  EXPECT_GT(ks2_p(a.angles, b.angles), 0.01);
  EXPECT_GT(ks_p(a.angles, kGeneric), 0.01);
}

TEST(Mcmc, FlatLikelihoodAcceptsAll) {
  McmcConfig cfg;
  const auto b = sample_ewc_mcmc(EwcParams(0.3, 1.2, 0.0, 0.6), 20000, cfg, 8);
  EXPECT_EQ(*b.diagnostics.acceptance_rate, 1.0);
  EXPECT_GT(ks_p(b.angles, EwcParams(1.2, 0, 0.6, 0)), 0.01);
}

TEST(Mcmc, MomentsWithinFourAutocorrelationAdjustedSe) {
  McmcConfig cfg;
  cfg.burn_in = 1000;
  const auto b = sample_ewc_mcmc(kGeneric, 100000, cfg, 9);
  ASSERT_TRUE(b.diagnostics.effective_sample_size.has_value());
  const double factor = std::min(1.0, *b.diagnostics.effective_sample_size / b.angles.size());
  EXPECT_LT(moment_z(b.angles, 1, trig_moment(1, kGeneric).value, factor), 4.0);
  EXPECT_LT(moment_z(b.angles, 2, trig_moment(2, kGeneric).value, factor), 4.0);
}

TEST(Mcmc, StationaryDistributionMatchesExactSamplers) {
  McmcConfig cfg;
  const auto chain = sample_ewc_mcmc(kGeneric, 10000, cfg, 10);
  const auto exact = sample_ewc_rejection(kGeneric, 10000, 11);
  EXPECT_GT(ks2_p(chain.angles, exact.angles), 0.01);
  McmcConfig multi;
  multi.chain_count = 4;
  const auto chains = sample_ewc_mcmc(kGeneric, 10000, multi, 12);
  EXPECT_EQ(chains.angles.size(), 10000u);
  EXPECT_GT(ks_p(chains.angles, kGeneric), 0.01);
}

TEST(Mcmc, ConfigValidation) {
  McmcConfig bad;
  bad.thin = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = {};
  bad.burn_in = -1;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = {};
  bad.chain_count = 0;
  EXPECT_THROW(sample_ewc_mcmc(kGeneric, 10, bad, 1), DomainError);
}

TEST(Marginal, ForwardSimulationIsWrappedCauchyAtPriorLocation) {
  // nu ~ WC(mu2, rho2), Theta | nu ~ WC(nu, rho1). The sum of the two
  // wrapped Cauchy variables is WC(mu2, rho1 rho2).
  const double mu1 = 1.1, mu2 = -0.6, r1 = 0.7, r2 = 0.5;
  Rng rng(13);
  std::vector<double> theta(20000);
  for (auto& t : theta) {
    const double nu = wc_inverse_cdf(rng.uniform(), WcParams(mu2, r2));
    t = wc_inverse_cdf(rng.uniform(), WcParams(nu, r1));
  }
  EXPECT_GT(ks_p(theta, EwcParams(mu2, 0, r1 * r2, 0)), 0.01);
  // Relocating by mu1 as well is clearly rejected.
  EXPECT_LT(ks_p(theta, EwcParams(mu1 + mu2, 0, r1 * r2, 0)), 1e-6);
}

TEST(Mixture, MatchesClosedFormCdf) {
  const double mu = 0.5;
  const auto b = sample_symmetric_mixture(CircAngle(mu), -0.3, 0.5, 100000, 14);
  const EwcParams equivalent(mu + kPi, mu, 0.3, 0.5);
  EXPECT_GT(ks_p(b.angles, equivalent), 0.01);
  const auto mean = empirical_moment(b.angles, 1);
  EXPECT_NEAR(std::arg(mean), std::arg(trig_moment(1, equivalent).value), 0.05);
  EXPECT_THROW(sample_symmetric_mixture(CircAngle(mu), 0.3, 0.5, 10, 1), DomainError);
}

TEST(Mixture, ZeroRhoReducesToWc) {
  const auto a = sample_symmetric_mixture(CircAngle(0.2), 0.0, 0.4, 1000, 15);
  Rng rng(15);
  for (double t : a.angles) {
    rng.uniform();
    EXPECT_DOUBLE_EQ(t, wc_inverse_cdf(rng.uniform(), WcParams(0.2, 0.4)));
  }
}

TEST(Exactness, SamplersAgreePairwise) {
  const double mu = -1.3;
  const EwcParams p(mu + kPi, mu, 0.4, 0.6);
  const auto mix = sample_symmetric_mixture(CircAngle(mu), -0.4, 0.6, 10000, 16);
  const auto rej = sample_ewc_rejection(p, 10000, 17);
  const auto inv = sample_ewc_invcdf(p, 10000, 18);
  EXPECT_GT(ks2_p(mix.angles, rej.angles), 0.01);
  EXPECT_GT(ks2_p(mix.angles, inv.angles), 0.01);
  EXPECT_GT(ks2_p(rej.angles, inv.angles), 0.01);
}

TEST(Determinism, AllSamplersReproduce) {
  McmcConfig cfg;
  const auto eq = [](const SampleBatch& a, const SampleBatch& b) { return a.angles == b.angles; };
  EXPECT_TRUE(eq(sample_wc(WcParams(1, .3), 500, 5), sample_wc(WcParams(1, .3), 500, 5)));
  EXPECT_TRUE(eq(sample_ewc_rejection(kGeneric, 500, 5), sample_ewc_rejection(kGeneric, 500, 5)));
  EXPECT_TRUE(eq(sample_ewc_invcdf(kGeneric, 200, 5), sample_ewc_invcdf(kGeneric, 200, 5)));
  EXPECT_TRUE(eq(sample_ewc_mcmc(kGeneric, 500, cfg, 5), sample_ewc_mcmc(kGeneric, 500, cfg, 5)));
  EXPECT_TRUE(eq(sample_symmetric_mixture(CircAngle(0), -.2, .3, 500, 5),
                 sample_symmetric_mixture(CircAngle(0), -.2, .3, 500, 5)));
  EXPECT_FALSE(eq(sample_ewc_rejection(kGeneric, 500, 5), sample_ewc_rejection(kGeneric, 500, 6)));
}
