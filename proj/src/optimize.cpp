#include "mdrlab/optimize.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace mdrlab::optimize {

Minimum1D brent_minimize(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t max_iter = 200;
  const auto [x, value] =
      boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2, max_iter);
  return {x, value};
}

std::optional<double> first_crossing(const std::function<double(double)>& g, double hi, int samples) {
  if (g(0.0) >= 0.0) return 0.0;
  double prev = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double r = hi * static_cast<double>(k) / samples;
    if (g(r) < 0.0) {
      prev = r;
      continue;
    }
    double lo = prev, up = r;
    for (int it = 0; it < 200 && up - lo > 4.0 * std::numeric_limits<double>::epsilon() * up; ++it) {
      const double mid = 0.5 * (lo + up);
      (g(mid) >= 0.0 ? up : lo) = mid;
    }
    return up;
  }
  return std::nullopt;
}

namespace {

struct SimplexClosure {
  const std::function<double(std::span<const double>)>* f;
  std::vector<double> scratch;
};

double simplex_trampoline(const gsl_vector* v, void* params) {
  auto* closure = static_cast<SimplexClosure*>(params);
  for (std::size_t i = 0; i < v->size; ++i) closure->scratch[i] = gsl_vector_get(v, i);
  return (*closure->f)(closure->scratch);
}

}  // namespace

SimplexResult simplex_minimize(const std::function<double(std::span<const double>)>& f, std::vector<double> start,
                               double step, double size_tol, int max_iter) {
  // GSL aborts the process on errors by default; report them through status codes instead.
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  const std::size_t n = start.size();
  SimplexClosure closure{&f, std::vector<double>(n)};
  gsl_multimin_function fn{&simplex_trampoline, n, &closure};

  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* steps = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(steps, step);

  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, steps);

  int iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }

  SimplexResult out{std::vector<double>(n), s->fval, iter, converged};
  for (std::size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);

  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  return out;
}

}  // namespace mdrlab::optimize
