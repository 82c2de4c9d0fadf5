#pragma once

// Periodic trapezoidal rule on [-pi, pi).
//
// For smooth 2pi-periodic integrands the rule converges geometrically, so node
// doubling until two successive estimates agree gives a reliable error bound.

#include <cmath>
#include <cstddef>
#include <type_traits>

#include "ewc/core.hpp"

namespace ewc {

template <typename Value>
struct QuadratureResult {
  Value value;
  double error_bound;
  std::size_t nodes;
};

/// n-node rule: (2pi / n) * sum f(-pi + 2pi k / n).
template <typename F>
auto periodic_trapezoid(F&& f, std::size_t nodes) {
  using Value = std::decay_t<decltype(f(0.0))>;
  Value sum{};
  const double h = kTwoPi / static_cast<double>(nodes);
  for (std::size_t k = 0; k < nodes; ++k) sum += f(-kPi + h * static_cast<double>(k));
  return sum * h;
}

/// Doubles the node count from min_nodes until successive estimates differ by
/// less than tol (absolute), or max_nodes is reached.
template <typename F>
auto periodic_trapezoid_adaptive(F&& f, double tol = 1e-12, std::size_t min_nodes = 64,
                                 std::size_t max_nodes = std::size_t{1} << 22) {
  using Value = std::decay_t<decltype(f(0.0))>;
  std::size_t nodes = min_nodes;
  Value previous = periodic_trapezoid(f, nodes);
  while (true) {
    // Reuse the previous nodes: the doubled rule only adds the midpoints.
    const double h = kTwoPi / static_cast<double>(nodes);
    Value mid{};
    for (std::size_t k = 0; k < nodes; ++k) mid += f(-kPi + h * (static_cast<double>(k) + 0.5));
    const Value current = 0.5 * (previous + mid * h);
    nodes *= 2;
    const double diff = std::abs(current - previous);
    if (diff < tol || nodes >= max_nodes) return QuadratureResult<Value>{current, diff, nodes};
    previous = current;
  }
}

}  // namespace ewc
