#include "ewc/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ewc/error.hpp"
#include "ewc/optimize.hpp"
#include "ewc/stats.hpp"

namespace ewc::fit {
namespace {

constexpr std::size_t kBlock = 4096;

double to_logit(double rho) {
  const double u = std::clamp(rho / kMaxFittedRho, 1e-6, 1.0 - 1e-9);
  return std::log(u / (1.0 - u));
}

double from_logit(double t) { return kMaxFittedRho / (1.0 + std::exp(-t)); }

using Coords = std::vector<double>;

Coords to_coords(const EwcParams& p) {
  return {p.mu1().value(), p.mu2().value(), to_logit(p.rho1()), to_logit(p.rho2())};
}

EwcParams from_coords(const Coords& x) { return {x[0], x[1], from_logit(x[2]), from_logit(x[3])}; }

template <typename F>
Eigen::Vector4d central_gradient(F&& f, const Coords& x, double h) {
  Eigen::Vector4d g;
  for (int i = 0; i < 4; ++i) {
    Coords up = x, down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

template <typename F>
Eigen::Matrix4d central_hessian(F&& f, const Coords& x, double h) {
  Eigen::Matrix4d hess;
  const double f0 = f(x);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      if (i == j) {
        Coords up = x, down = x;
        up[i] += h;
        down[i] -= h;
        hess(i, i) = (f(up) - 2.0 * f0 + f(down)) / (h * h);
      } else {
        Coords pp = x, pm = x, mp = x, mm = x;
        pp[i] += h, pp[j] += h;
        pm[i] += h, pm[j] -= h;
        mp[i] -= h, mp[j] += h;
        mm[i] -= h, mm[j] -= h;
        hess(i, j) = hess(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      }
    }
  }
  return hess;
}

struct StartOutcome {
  Coords x;
  double objective;  // negative mean log-likelihood
  int iterations;
  EwcParams init;
};

}  // namespace

Dataset::Dataset(std::vector<double> angles, std::string source) : angles_(std::move(angles)), source_(std::move(source)) {
  if (angles_.empty()) throw DomainError("dataset must contain at least one angle");
  for (double& t : angles_) t = normalize_angle(t);
}

LogLikelihood::LogLikelihood(const Dataset& data) : cos_(data.size()), sin_(data.size()) {
  const auto angles = data.angles();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    cos_[i] = std::cos(angles[i]);
    sin_[i] = std::sin(angles[i]);
  }
}

double LogLikelihood::operator()(const EwcParams& p, Execution exec) const {
  const std::size_t n = cos_.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const std::complex<double> f1 = p.phi1();
  const std::complex<double> f2 = p.phi2();
  const double x1 = f1.real(), y1 = f1.imag(), x2 = f2.real(), y2 = f2.imag();
  std::vector<double> partial(blocks, 0.0);

  // K_j = |z - phi_j|^2, which avoids the cancellation in 1 + rho^2 - 2 rho cos.
  const auto block_sum = [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    double s = 0.0;
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double k1 = (cos_[i] - x1) * (cos_[i] - x1) + (sin_[i] - y1) * (sin_[i] - y1);
      const double k2 = (cos_[i] - x2) * (cos_[i] - x2) + (sin_[i] - y2) * (sin_[i] - y2);
      s += std::log(k1 * k2);
    }
    partial[b] = s;
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) block_sum(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < blocks; ++b) block_sum(b);
  }
  double kernel_sum = 0.0;
  for (double s : partial) kernel_sum += s;
  return static_cast<double>(n) * std::log(normalizing_constant(p).value) - kernel_sum;
}

double loglik(const Dataset& data, const EwcParams& p, Execution exec) { return LogLikelihood(data)(p, exec); }

WcParams fit_wc(const Dataset& data) {
  if (data.size() < 2) throw DomainError("fit_wc needs at least two observations");
  const std::complex<double> m = empirical_moment(data.angles(), 1);
  const double r = std::abs(m);
  if (!(r < 1.0 - 1e-12)) throw DomainError("degenerate sample: all angles coincide");
  return {r > 0.0 ? std::arg(m) : 0.0, r};
}

std::vector<EwcParams> default_starts(const Dataset& data) {
  const WcParams wc = fit_wc(data);
  const double m = wc.mu.value();
  const double r = std::clamp(wc.rho, 0.01, 0.95);
  return {
      EwcParams(m, m, r, 0.01),
      EwcParams(m, m, 0.01, r),
      EwcParams(m + kPi / 2, m - kPi / 2, 0.5, 0.5),
      EwcParams(m, m + kPi, 0.6, 0.3),
      EwcParams(m + kPi / 3, m - kPi / 3, 0.6, 0.3),
      EwcParams(m - kPi / 3, m + kPi / 3, 0.6, 0.3),
      EwcParams(m + 2 * kPi / 3, m, 0.3, 0.6),
      EwcParams(m - 2 * kPi / 3, m, 0.3, 0.6),
  };
}

FitResult fit_ewc(const Dataset& data, const std::optional<EwcParams>& init, const FitOptions& options) {
  if (data.size() < 8) throw DomainError("fit_ewc needs at least eight observations");
  const LogLikelihood ll(data);
  const double n = static_cast<double>(data.size());
  // Starts run in parallel, so each likelihood evaluation is serial.
  const auto objective = [&](const Coords& x) { return -ll(from_coords(x), Execution::serial) / n; };

  std::vector<EwcParams> starts;
  if (init) starts.push_back(*init);
  for (const auto& s : default_starts(data)) starts.push_back(s);

  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.f_tolerance = 1e-13;
  nm.x_tolerance = 1e-9;
  nm.initial_step = 0.2;

  std::vector<StartOutcome> outcomes(starts.size());
  const auto run_start = [&](std::size_t k) {
    const Coords x0 = to_coords(starts[k]);
    NelderMeadResult r = nelder_mead(objective, x0, nm);
    int iterations = r.evaluations;
    // Newton polish on the mean log-likelihood.
    Coords x = r.x;
    double fx = r.value;
    for (int it = 0; it < 20; ++it) {
      const Eigen::Vector4d g = central_gradient(objective, x, 1e-6);
      if (g.norm() < 1e-10) break;
      const Eigen::Matrix4d h = central_hessian(objective, x, 1e-4);
      const Eigen::LLT<Eigen::Matrix4d> llt(h);
      if (llt.info() != Eigen::Success) break;
      const Eigen::Vector4d step = llt.solve(g);
      bool improved = false;
      for (double t = 1.0; t > 1e-4; t *= 0.5) {
        Coords trial = x;
        for (int i = 0; i < 4; ++i) trial[i] -= t * step[i];
        const double ft = objective(trial);
        ++iterations;
        if (ft <= fx) {
          x = trial;
          fx = ft;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    outcomes[k] = {x, fx, iterations, starts[k]};
  };

  const auto count = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, options.jobs))
  for (std::int64_t k = 0; k < count; ++k) run_start(static_cast<std::size_t>(k));

  const auto best = std::min_element(outcomes.begin(), outcomes.end(),
                                     [](const StartOutcome& a, const StartOutcome& b) { return a.objective < b.objective; });

  FitResult result{from_coords(best->x).canonical(), 0.0, false, best->iterations, std::nullopt, best->init, 0.0, false};
  result.loglik = ll(from_coords(best->x), Execution::serial);
  result.gradient_norm = central_gradient(objective, best->x, 1e-6).norm();
  result.converged = result.gradient_norm < 1e-6;
  result.near_boundary = result.params.rho1() > 0.999 || result.params.rho2() > 0.999;

  // Observed information in (mu1, mu2, rho1, rho2), step 1e-4.
  const EwcParams& est = result.params;
  const double h = 1e-4;
  if (est.rho2() > h && est.rho1() < 1.0 - h) {
    const auto natural = [&](const Coords& y) { return -ll(EwcParams(y[0], y[1], y[2], y[3]), Execution::serial); };
    const Coords y{est.mu1().value(), est.mu2().value(), est.rho1(), est.rho2()};
    const Eigen::Matrix4d info = central_hessian(natural, y, h);
    const Eigen::LLT<Eigen::Matrix4d> llt(info);
    if (llt.info() == Eigen::Success) {
      const Eigen::Matrix4d cov = llt.solve(Eigen::Matrix4d::Identity());
      result.standard_errors = std::array<double, 4>{std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1)),
                                                     std::sqrt(cov(2, 2)), std::sqrt(cov(3, 3))};
    }
  }
  return result;
}

}  // namespace ewc::fit
