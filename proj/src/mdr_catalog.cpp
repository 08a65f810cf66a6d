#include "mdrlab/mdr_catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "mdrlab/error.hpp"
#include "mdrlab/optimize.hpp"

namespace mdrlab {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kRaySamples = 64;
constexpr int kAngleSamples = 64;
// Stand-in for "this ray never reaches the region" that Brent can compare.
constexpr double kUnreachable = 1e300;

double clamped_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

void check_context(const EnsembleContext& ctx) {
  const bool finite = std::isfinite(ctx.deltaA) && std::isfinite(ctx.deltaB) && std::isfinite(ctx.absC);
  if (!finite || ctx.deltaA < 0.0 || ctx.deltaB < 0.0 || ctx.absC < 0.0) {
    throw Error(ErrorCode::ContextInvalid, "ensemble context must be finite and non-negative");
  }
  if (!ctx.robertsonValid || ctx.deltaA * ctx.deltaB < ctx.absC - kSlack) {
    throw Error(ErrorCode::ContextInvalid, "Robertson relation violated by ensemble context");
  }
}

void check_qubit_domain(const EnsembleContext& ctx) {
  if (ctx.deltaA > 1.0 + kSlack || ctx.deltaB > 1.0 + kSlack || ctx.absC > 1.0 + kSlack) {
    throw Error(ErrorCode::OutOfDomain, "B2 needs a qubit context (Delta A, Delta B, |<C>| <= 1)");
  }
}

double b2_margin(double eps, double eta, double absC) {
  if (eps > 2.0 + kSlack || eta > 2.0 + kSlack) {
    throw Error(ErrorCode::OutOfDomain, "B2 needs eps, eta <= 2");
  }
  const double se = clamped_sqrt(1.0 - eps * eps / 4.0);
  const double sh = clamped_sqrt(1.0 - eta * eta / 4.0);
  return eps * eps * se * se + eta * eta * sh * sh + 2.0 * eps * eta * clamped_sqrt(1.0 - absC * absC) * sh * se -
         absC * absC;
}

// Largest eigenvalue of the B1 quadratic form [[dB^2, s], [s, dA^2]].
double b1_lambda_max(const EnsembleContext& ctx) {
  const double s = clamped_sqrt(ctx.deltaA * ctx.deltaA * ctx.deltaB * ctx.deltaB - ctx.absC * ctx.absC);
  Eigen::Matrix2d q;
  q << ctx.deltaB * ctx.deltaB, s, s, ctx.deltaA * ctx.deltaA;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(q, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1);
}

// Distance from the origin, along direction (cos t, sin t), to the first
// allowed point; nullopt if the ray never enters the allowed region.
std::optional<double> ray_radius(MdrId mdr, const EnsembleContext& ctx, double t) {
  const double c = std::cos(t), s = std::sin(t);
  const double C = ctx.absC;
  switch (mdr) {
    case MdrId::He: {
      if (C == 0.0) return 0.0;
      const double a = c * s;
      if (a <= 0.0) return std::nullopt;
      return std::sqrt(C / a);
    }
    case MdrId::Oz: {
      // r^2 cs + r (c dB + s dA) = C, positive root in the cancellation-free form.
      const double a = c * s, b = c * ctx.deltaB + s * ctx.deltaA;
      const double denom = b + std::sqrt(b * b + 4.0 * a * C);
      if (C == 0.0) return 0.0;
      if (denom <= 0.0) return std::nullopt;
      return 2.0 * C / denom;
    }
    case MdrId::B1: {
      const double off = clamped_sqrt(ctx.deltaA * ctx.deltaA * ctx.deltaB * ctx.deltaB - C * C);
      const double q = c * c * ctx.deltaB * ctx.deltaB + s * s * ctx.deltaA * ctx.deltaA + 2.0 * c * s * off;
      if (C == 0.0) return 0.0;
      if (q <= 0.0) return std::nullopt;
      return C / std::sqrt(q);
    }
    case MdrId::Ha:
    case MdrId::We:
    case MdrId::B2: {
      const double cap = (mdr == MdrId::B2) ? 2.0 : 1.0;
      const double ex = (mdr == MdrId::B2) ? cap : ctx.deltaA;
      const double ey = (mdr == MdrId::B2) ? cap : ctx.deltaB;
      double hi = std::numeric_limits<double>::infinity();
      if (c > 0.0) hi = std::min(hi, ex / c);
      if (s > 0.0) hi = std::min(hi, ey / s);
      // Keep the end point inside the domain despite rounding in cos/sin.
      hi *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
      auto g = [&](double r) { return optimal_margin(mdr, {r * c, r * s}, ctx); };
      return optimize::first_crossing(g, hi, kRaySamples);
    }
  }
  return std::nullopt;
}

double ray_distance_sq(MdrId mdr, const EnsembleContext& ctx, double t) {
  const auto r = ray_radius(mdr, ctx, t);
  return r ? (*r) * (*r) : kUnreachable;
}

struct DistanceSolution {
  double value;
  double angle;
};

DistanceSolution solve_distance(MdrId mdr, const EnsembleContext& ctx) {
  auto f = [&](double t) { return ray_distance_sq(mdr, ctx, t); };
  std::vector<double> values(kAngleSamples + 1);
  std::size_t best = 0;
  for (int k = 0; k <= kAngleSamples; ++k) {
    values[k] = f(kHalfPi * k / kAngleSamples);
    if (values[k] < values[best]) best = static_cast<std::size_t>(k);
  }
  if (values[best] >= kUnreachable) {
    throw Error(ErrorCode::ContextInvalid, "allowed region not reachable from the origin");
  }
  const double lo = kHalfPi * static_cast<double>(best > 0 ? best - 1 : 0) / kAngleSamples;
  const double hi = kHalfPi * static_cast<double>(std::min<std::size_t>(best + 1, kAngleSamples)) / kAngleSamples;
  DistanceSolution sol{values[best], kHalfPi * static_cast<double>(best) / kAngleSamples};
  const auto refined = optimize::brent_minimize(f, lo, hi);
  if (refined.value < sol.value) sol = {refined.value, refined.x};
  return sol;
}

}  // namespace

std::string_view to_string(MdrId id) noexcept {
  switch (id) {
    case MdrId::He: return "He";
    case MdrId::Oz: return "Oz";
    case MdrId::Ha: return "Ha";
    case MdrId::We: return "We";
    case MdrId::B1: return "B1";
    case MdrId::B2: return "B2";
  }
  return "?";
}

std::optional<MdrId> parse_mdr(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (auto id : kAllMdrs) {
    std::string candidate(to_string(id));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (candidate == lower) return id;
  }
  return std::nullopt;
}

EnsembleContext EnsembleContext::make(double deltaA, double deltaB, double absC) {
  return {deltaA, deltaB, absC, deltaA * deltaB >= absC - kSlack};
}

double mdr_margin(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx, const std::optional<MeasurementContext>& mctx) {
  check_context(ctx);
  const double e = p.eps, h = p.eta, C = ctx.absC;
  const double dA = ctx.deltaA, dB = ctx.deltaB;
  switch (mdr) {
    case MdrId::He: return e * h - C;
    case MdrId::Oz: return e * h + e * dB + h * dA - C;
    case MdrId::Ha:
    case MdrId::We: {
      if (!mctx) throw Error(ErrorCode::MissingMeasurementContext, "Ha and We need Delta calA, Delta calB");
      const double dcA = mctx->deltaCalA, dcB = mctx->deltaCalB;
      if (mdr == MdrId::Ha) return e * h + e * dcB + h * dcA - C;
      return e * (dcB + dB) + h * (dcA + dA) - 2.0 * C;
    }
    case MdrId::B1:
      return dB * dB * e * e + dA * dA * h * h + 2.0 * e * h * clamped_sqrt(dA * dA * dB * dB - C * C) - C * C;
    case MdrId::B2: check_qubit_domain(ctx); return b2_margin(e, h, C);
  }
  return 0.0;
}

bool satisfies(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx, const std::optional<MeasurementContext>& mctx) {
  return mdr_margin(mdr, p, ctx, mctx) >= -kSlack;
}

double optimal_margin(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx) {
  if (mdr != MdrId::Ha && mdr != MdrId::We) return mdr_margin(mdr, p, ctx);
  if (p.eps > ctx.deltaA || p.eta > ctx.deltaB) return -std::numeric_limits<double>::infinity();
  const MeasurementContext optimal{clamped_sqrt(ctx.deltaA * ctx.deltaA - p.eps * p.eps),
                                   clamped_sqrt(ctx.deltaB * ctx.deltaB - p.eta * p.eta)};
  return mdr_margin(mdr, p, ctx, optimal);
}

double shortest_distance_sq(MdrId mdr, const EnsembleContext& ctx) {
  check_context(ctx);
  if (mdr == MdrId::B2) check_qubit_domain(ctx);
  switch (mdr) {
    case MdrId::He: return 2.0 * ctx.absC;
    case MdrId::B1: {
      if (ctx.absC == 0.0) return 0.0;
      return ctx.absC * ctx.absC / b1_lambda_max(ctx);
    }
    default: {
      // Rounding can leave |<C>| a hair above Delta A Delta B (inside the
      // Robertson slack); clip it so the numeric search stays well posed.
      EnsembleContext clipped = ctx;
      clipped.absC = std::min(ctx.absC, ctx.deltaA * ctx.deltaB);
      if (clipped.absC == 0.0) return 0.0;
      return solve_distance(mdr, clipped).value;
    }
  }
}

double b1_minor_axis_formula(const EnsembleContext& ctx) {
  const double s = ctx.deltaA * ctx.deltaA + ctx.deltaB * ctx.deltaB;
  return 0.5 * (s - clamped_sqrt(s * s - 4.0 * ctx.absC * ctx.absC));
}

double kappa(MdrId mdr) noexcept {
  constexpr double root2 = std::numbers::sqrt2;
  switch (mdr) {
    case MdrId::He: return 2.0;
    case MdrId::B2: return 4.0 - 2.0 * root2;
    case MdrId::B1: return 1.0;
    case MdrId::We: return 0.59;
    case MdrId::Ha: return 2.0 / 5.0;
    case MdrId::Oz: return (2.0 - root2) * (2.0 - root2);
  }
  return 0.0;
}

std::vector<ErrorPoint> region_boundary(MdrId mdr, const EnsembleContext& ctx, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "region_boundary needs n >= 2");
  check_context(ctx);
  if (mdr == MdrId::B2) check_qubit_domain(ctx);

  // A ray contributes a boundary point only if it meets the curve where the
  // margin actually vanishes (not at the edge of the Ha/We/B2 domain).
  auto boundary_radius = [&](double t) -> std::optional<double> {
    const auto r = ray_radius(mdr, ctx, t);
    if (!r || *r == 0.0) return std::nullopt;
    const double residual = optimal_margin(mdr, {*r * std::cos(t), *r * std::sin(t)}, ctx);
    if (std::abs(residual) > 1e-9) return std::nullopt;
    return r;
  };

  const std::size_t scan = 4 * n;
  // He is asymptotic to both axes; cos(pi/2) is not exactly zero in floating point.
  const std::size_t first = (mdr == MdrId::He) ? 1 : 0, last = (mdr == MdrId::He) ? scan - 1 : scan;
  double t_lo = -1.0, t_hi = -1.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double t = kHalfPi * static_cast<double>(k) / static_cast<double>(scan);
    if (!boundary_radius(t)) continue;
    if (t_lo < 0.0) t_lo = t;
    t_hi = t;
  }
  if (t_lo < 0.0 || t_hi <= t_lo) {
    throw Error(ErrorCode::ContextInvalid, "no boundary curve in the first quadrant for this context");
  }

  std::vector<double> angles(n);
  for (std::size_t k = 0; k < n; ++k) {
    angles[k] = t_lo + (t_hi - t_lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  const double t_star = (mdr == MdrId::He) ? std::numbers::pi / 4.0 : solve_distance(mdr, ctx).angle;
  if (t_star > t_lo && t_star < t_hi) {
    auto nearest = std::min_element(angles.begin(), angles.end(), [&](double a, double b) {
      return std::abs(a - t_star) < std::abs(b - t_star);
    });
    *nearest = t_star;
  }

  std::vector<ErrorPoint> out;
  out.reserve(n);
  for (double t : angles) {
    if (const auto r = boundary_radius(t)) out.push_back({*r * std::cos(t), *r * std::sin(t)});
  }
  if (out.size() != n) {
    throw Error(ErrorCode::IdentityViolation, "boundary trace lost points inside its own angular range");
  }
  return out;
}

}  // namespace mdrlab
