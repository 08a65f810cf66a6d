#pragma once

// Thin wrappers over Boost.Math (1-D) and GSL (simplex) minimizers.

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mdrlab::optimize {

struct Minimum1D {
  double x;
  double value;
};

/// Brent's method (golden section with parabolic steps) on [lo, hi].
Minimum1D brent_minimize(const std::function<double(double)>& f, double lo, double hi);

/// Smallest r in [0, hi] with g(r) >= 0. Scans `samples` equally spaced points
/// and bisects the first bracket to machine precision. std::nullopt when no
/// sample is non-negative.
std::optional<double> first_crossing(const std::function<double(double)>& g, double hi, int samples);

struct SimplexResult {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

/// Nelder-Mead (GSL nmsimplex2) from `start` with initial step `step`.
/// Stops when the simplex size falls below `size_tol` or after `max_iter`.
SimplexResult simplex_minimize(const std::function<double(std::span<const double>)>& f, std::vector<double> start,
                               double step, double size_tol, int max_iter);

}  // namespace mdrlab::optimize
