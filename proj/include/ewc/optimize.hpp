#pragma once

#include <functional>
#include <vector>

namespace ewc {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  /// Stop when the simplex spread in function value falls below this.
  double f_tolerance = 1e-12;
  /// ... and its vertices lie within this distance of the best vertex.
  double x_tolerance = 1e-10;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

/// Minimises f by the Nelder-Mead simplex method (standard coefficients
/// 1, 2, 0.5, 0.5) starting from an axis-aligned simplex around x0.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace ewc
