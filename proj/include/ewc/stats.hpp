#pragma once

// Goodness-of-fit and Monte Carlo summaries shared by the samplers, the
// Brownian oracle and the verification sweeps.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ewc {

/// Empirical n-th trigonometric moment mean(exp(i n theta)).
std::complex<double> empirical_moment(std::span<const double> angles, int n);

/// sup |F_n - F| for a continuous CDF on [-pi, pi).
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov p-value P(D > d) with Stephens' small-sample
/// correction; effective_n is n for one sample and nm/(n+m) for two.
double ks_pvalue(double d, double effective_n);

struct ChiSquareResult {
  double statistic;
  double pvalue;
  std::size_t dof;
};

/// Pearson chi-square against expected counts; dof = bins - 1 - fitted_params.
ChiSquareResult chi_square_test(std::span<const std::size_t> observed, std::span<const double> expected,
                                std::size_t fitted_params = 0);

/// Counts of angles in `bins` equal-width bins covering [-pi, pi).
std::vector<std::size_t> circular_histogram(std::span<const double> angles, std::size_t bins);

/// sum_k |count_k / n - P_k| over equal-width bins, with P_k the exact bin
/// probabilities supplied by `bin_probability(lo, hi)`.
double histogram_l1(std::span<const double> angles, std::size_t bins,
                    const std::function<double(double, double)>& bin_probability);

/// Effective sample size from the initial-positive-sequence estimate of the
/// integrated autocorrelation time.
double effective_sample_size(std::span<const double> series);

}  // namespace ewc
