#include "ewc/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "ewc/core.hpp"
#include "ewc/error.hpp"

namespace ewc {

std::complex<double> empirical_moment(std::span<const double> angles, int n) {
  if (angles.empty()) throw DomainError("empirical moment of an empty sample");
  std::complex<double> sum{0.0, 0.0};
  for (double t : angles) sum += std::polar(1.0, n * t);
  return sum / static_cast<double>(angles.size());
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("KS statistic of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_pvalue(double d, double effective_n) {
  const double sn = std::sqrt(effective_n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square_test(std::span<const std::size_t> observed, std::span<const double> expected,
                                std::size_t fitted_params) {
  if (observed.size() != expected.size() || observed.size() < 2 + fitted_params) {
    throw DomainError("chi-square test needs matching bins and positive degrees of freedom");
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double diff = static_cast<double>(observed[k]) - expected[k];
    stat += diff * diff / expected[k];
  }
  const std::size_t dof = observed.size() - 1 - fitted_params;
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return {stat, boost::math::cdf(boost::math::complement(dist, stat)), dof};
}

std::vector<std::size_t> circular_histogram(std::span<const double> angles, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  const double width = kTwoPi / static_cast<double>(bins);
  for (double t : angles) {
    auto k = static_cast<std::size_t>((normalize_angle(t) + kPi) / width);
    counts[std::min(k, bins - 1)]++;
  }
  return counts;
}

double histogram_l1(std::span<const double> angles, std::size_t bins,
                    const std::function<double(double, double)>& bin_probability) {
  if (angles.empty() || bins == 0) throw DomainError("histogram needs samples and bins");
  const auto counts = circular_histogram(angles, bins);
  const double n = static_cast<double>(angles.size());
  const double width = kTwoPi / static_cast<double>(bins);
  double l1 = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double lo = -kPi + width * static_cast<double>(k);
    const double hi = k + 1 == bins ? kPi : lo + width;
    l1 += std::abs(static_cast<double>(counts[k]) / n - bin_probability(lo, hi));
  }
  return l1;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) return static_cast<double>(n);
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(n);
  std::transform(series.begin(), series.end(), centred.begin(), [&](double v) { return v - mean; });
  const auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return static_cast<double>(n);
  // Geyer: sum consecutive autocorrelation pairs while the pair sums stay positive.
  double tau = -1.0;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return static_cast<double>(n) / std::max(tau, 1.0 / static_cast<double>(n));
}

}  // namespace ewc
