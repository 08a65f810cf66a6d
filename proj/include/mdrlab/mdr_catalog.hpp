#pragma once

// The six measurement-disturbance relations (MDRs), membership tests in the
// (eps, eta) plane, boundary traces, and the squared shortest distance f_q
// from each allowed region to the origin.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace mdrlab {

enum class MdrId { He, Oz, Ha, We, B1, B2 };

inline constexpr std::array<MdrId, 6> kAllMdrs{MdrId::He, MdrId::Oz, MdrId::Ha,
                                               MdrId::We, MdrId::B1, MdrId::B2};

std::string_view to_string(MdrId id) noexcept;
/// Case-insensitive ("he", "Oz", "B2", ...).
std::optional<MdrId> parse_mdr(std::string_view name) noexcept;

/// Ensemble data of a state: (Delta A, Delta B, |<C>|).
struct EnsembleContext {
  double deltaA = 0.0;
  double deltaB = 0.0;
  double absC = 0.0;
  bool robertsonValid = false;

  /// Fills robertsonValid from Delta A * Delta B >= |<C>| - 1e-12.
  static EnsembleContext make(double deltaA, double deltaB, double absC);
};

/// Spreads of the measured observables (Delta calA, Delta calB); needed by Ha and We.
struct MeasurementContext {
  double deltaCalA = 0.0;
  double deltaCalB = 0.0;
};

struct ErrorPoint {
  double eps = 0.0;
  double eta = 0.0;
};

/// Left side minus right side of the MDR inequality at `p`.
/// Errors: ContextInvalid, MissingMeasurementContext (Ha/We), OutOfDomain (B2).
double mdr_margin(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx,
                  const std::optional<MeasurementContext>& mctx = std::nullopt);

/// True iff mdr_margin >= -1e-12.
bool satisfies(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx,
               const std::optional<MeasurementContext>& mctx = std::nullopt);

/// Margin used for the distance problem: Ha and We take the optimal
/// measurement spreads Delta calA^2 = Delta A^2 - eps^2 and
/// Delta calB^2 = Delta B^2 - eta^2, and are undefined (-infinity) outside
/// eps <= Delta A, eta <= Delta B.
double optimal_margin(MdrId mdr, ErrorPoint p, const EnsembleContext& ctx);

/// r_q^2 = f_q(Delta A, Delta B, |<C>|). Closed forms for He and B1, a
/// ray-cast boundary search refined by Brent's method for the others.
double shortest_distance_sq(MdrId mdr, const EnsembleContext& ctx);

/// B1 distance via the minor-axis formula
/// (Delta A^2 + Delta B^2 - sqrt((Delta A^2 + Delta B^2)^2 - 4 <C>^2)) / 2.
double b1_minor_axis_formula(const EnsembleContext& ctx);

/// Qubit constant kappa_q: f_q at Delta A = Delta B = |<C>| = 1.
/// We's value is the two-digit published constant 0.59.
double kappa(MdrId mdr) noexcept;

/// True for MDRs whose published kappa is only known to two digits.
constexpr bool kappa_is_approximate(MdrId mdr) noexcept { return mdr == MdrId::We; }

/// `n` points on the allowed-region boundary, ordered by polar angle from the
/// eps axis. The sample closest to the distance minimizer is moved onto it.
std::vector<ErrorPoint> region_boundary(MdrId mdr, const EnsembleContext& ctx, std::size_t n);

}  // namespace mdrlab
