#pragma once

// Certified dynamics of the model map along the real orbit of 1/2 (the
// near-identity correction is taken as the identity, with every containment
// inflated by the declared correction budget):
//
//   * the escape condition f'(x) >= 100 x, f(x) >= 50 x^2 - 1 on [0, X];
//   * the orbit x_k = f^k(1/2) in tower arithmetic with certified spacing
//     x_{k+1} - x_k >= 11 and derivative f'(x_k) >= 50;
//   * the disk indices p_n nearest to x_n;
//   * Koebe distortion factors and the pullback disks U_n around 1/2;
//   * the landing disk of f^{n+1}(U_n) inside D_{p_n}, and the degree /
//     critical-value adjustment that nests it inside the next U.
//
// Radii below the double range are carried as -ln(radius) towers.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/errors.hpp"
#include "wanderlab/interval.hpp"
#include "wanderlab/model_map.hpp"
#include "wanderlab/parameters.hpp"
#include "wanderlab/tower.hpp"

namespace wanderlab {

/// Radius constants of the pullback disks: U_n has radius
/// kInnerRadiusFactor / (f^n)'(1/2) and lies in the disk of radius
/// kOuterRadiusFactor / (f^n)'(1/2) about 1/2.
inline constexpr double kInnerRadiusFactor = 0.009;
inline constexpr double kOuterRadiusFactor = 20.0;
/// Radius of the landing disk inside D_{p_n}.
inline constexpr double kLandingRadius = 0.25;
/// Spacing and derivative thresholds of the escaping orbit.
inline constexpr double kOrbitSpacing = 11.0;
inline constexpr double kOrbitDerivative = 50.0;
/// Default depth of the symbolic orbit certificates.
inline constexpr int kSymbolicDepth = 25;

// ---------------------------------------------------------------- escape

struct EscapeVerdict {
  bool pass = false;
  double X = 0.0;
  Interval lambda_sq{0.0};   // certified lambda^2 (>= 100 drives the minorant)
  bool minorant_pass = false;  // sinh t >= t, cosh t >= 1 + t^2/2 on [0, min(X,1)]
  long boxes = 0;            // subdivision boxes on [1, X]
  long tower_boxes = 0;      // boxes decided in the log domain
  std::string detail;
};

/// Verifies f'(x) >= 100 x and f(x) >= 50 x^2 - 1 for all x in [0, X].
/// Throws PreconditionError when lambda < 10 (the model's dphi/dx = 1 then
/// falls below 10 / lambda).
EscapeVerdict check_escape_condition(const ParameterSet& params, double X);

// ----------------------------------------------------------------- orbit

struct OrbitRecord {
  int k = 0;
  TowerReal x;                 // x_k
  TowerReal logderiv;          // ln (f^k)'(1/2), accumulated with tw_add
  TowerReal step_logderiv;     // ln f'(x_k)   (k < N only)
  /// x_{k+1} - x_k >= 11 and f'(x_k) >= 50; evaluated for k < N.
  std::optional<CertifiedOrdering> spacing;
  std::optional<CertifiedOrdering> derivative;
  bool spacing_ok() const {
    return spacing && *spacing == CertifiedOrdering::certainly_greater;
  }
  bool derivative_ok() const {
    return derivative && *derivative == CertifiedOrdering::certainly_greater;
  }
};

/// Records k = 0..N. Throws CertificationError (with the step) when a
/// spacing or derivative verdict is not certainly-greater.
std::vector<OrbitRecord> iterate_orbit(const ParameterSet& params, int N);

/// Certified enclosure of n ln 50 + ln n!.
Interval factorial_growth_bound(int n);

// ------------------------------------------------------------- index p_n

struct IndexSelection {
  int n = 0;
  TowerReal proxy;            // x_n / pi
  std::optional<long> p;      // concrete index when representable
  Interval gap{0.0};          // |x_n - a_p| (concrete only)
  bool gap_certified = false; // gap <= (pi + 1/10)/2 certainly
  bool gap_asserted = false;  // symbolic: follows from the anchor spacing
  bool tie_broken = false;    // both candidates indistinguishable
};

/// Largest admissible gap |x_n - a_{p_n}|.
Interval index_gap_bound();

IndexSelection select_p(int n, const std::vector<OrbitRecord>& orbit,
                        const AnchorTable& anchors);

// ------------------------------------------------------------------ Koebe

namespace koebe_detail {
template <class T>
bool in_open_unit(const T& r) {
  return T(0) < r && r < T(1);
}
inline bool in_open_unit(const Interval& r) { return r.lo() > 0.0 && r.hi() < 1.0; }
}  // namespace koebe_detail

/// Distortion bounds for a univalent F on the unit disk with F(0) = 0,
/// F'(0) = 1, at |z| = r.
template <class T>
struct KoebeFactors {
  T growth_max;  // r / (1 - r)^2
  T growth_min;  // r / (1 + r)^2
  T deriv_max;   // (1 + r) / (1 - r)^3
  T deriv_min;   // (1 - r) / (1 + r)^3
  T quarter;     // 1/4
};

template <class T>
KoebeFactors<T> koebe_factors(const T& r) {
  if (!koebe_detail::in_open_unit(r)) {
    throw DomainError("koebe_factors: r must lie in (0, 1)");
  }
  const T one(1);
  const T p = one + r;
  const T m = one - r;
  return {r / (m * m), r / (p * p), p / (m * m * m), m / (p * p * p), one / T(4)};
}

/// Inner constant of the pullback: the quarter theorem on the landing disk
/// of radius 1/4, times the derivative distortion at |z| = 1/2.
template <class T>
T koebe_inner_constant() {
  const KoebeFactors<T> k = koebe_factors(T(1) / T(2));
  return k.quarter * (T(1) / T(4)) * k.deriv_min;
}

/// Outer constant: the inverse branch lives on a disk of radius 10, the
/// landing disk lies within radius 5 of x_n, hence growth_max(1/2) * 10.
template <class T>
T koebe_outer_constant() {
  const KoebeFactors<T> k = koebe_factors(T(1) / T(2));
  return T(10) * k.growth_max;
}

// --------------------------------------------------------------- pullback

enum class Regime { concrete, symbolic };
const char* to_string(Regime r);

struct KoebeLink {
  std::string name;
  Interval value{0.0};
};

/// Per-step evidence that the inverse branch at x_k is univalent on
/// D(x_k, 10) and maps D(x_k, 5) into the half-strip.
struct PullbackStep {
  int k = 0;
  CertifiedOrdering clear_of_unit_disk = CertifiedOrdering::indeterminate;  // x_k vs 11
  CertifiedOrdering derivative = CertifiedOrdering::indeterminate;          // f'(x_{k-1}) vs 50
};

/// Interval image of the circle bounding U_n under f^n, compared with the
/// landing disk D(z_{p_n}, 1/4).
struct BoundaryImage {
  long boxes = 0;
  double max_distance = 0.0;  // upper bound of |f^n(z) - z_{p_n}| on the circle
  double margin = 0.0;        // 1/4 - max_distance
  bool pass = false;
};

struct PullbackCertificate {
  int n = 0;
  Regime regime = Regime::symbolic;
  IndexSelection index;
  Complex center_offset{};         // w'_n = center(U_n) - 1/2
  double center_offset_bound = 0;  // upper bound of |w'_n| (rounded up)
  double radius_inner = 0.0;       // 0 when below the double range
  double radius_outer = 0.0;
  TowerReal neg_log_inner;         // -ln radius_inner
  TowerReal neg_log_outer;         // -ln radius_outer
  std::optional<Interval> neg_log_inner_value;  // same, when below 1e300
  std::vector<KoebeLink> koebe_chain;
  std::vector<PullbackStep> steps;
  CertifiedOrdering landing_inside_branch = CertifiedOrdering::indeterminate;  // |z_p - x_n| + 1/4 vs 5
  std::optional<BoundaryImage> image;
  bool pass = false;

  Complex center() const { return Complex(0.5, 0.0) + center_offset; }
};

/// Requires orbit records through step n.
PullbackCertificate build_U(int n, const std::vector<OrbitRecord>& orbit,
                            const ParameterSet& params, const AnchorTable& anchors);

// ---------------------------------------------------------------- landing

struct DiskEnclosure {
  enum class Anchor { orbit_point, disk_index, base_point };
  enum class Rigor { certified_interval, sampled };
  Anchor anchor = Anchor::base_point;
  long anchor_index = 0;
  Complex offset_center{};
  double radius = 0.0;        // 0 when below the double range
  TowerReal neg_log_radius;   // -ln radius
  std::optional<Interval> neg_log_radius_value;  // same, when below 1e300
  Rigor rigor = Rigor::certified_interval;
};

const char* to_string(DiskEnclosure::Anchor a);
const char* to_string(DiskEnclosure::Rigor r);

/// -ln(landing radius) > -ln(inner radius), compared on plain intervals when
/// both fit (tower round trips would blur margins of one part in 1e12).
CertifiedOrdering compare_log_radii(const TowerReal& a, const std::optional<Interval>& av,
                                    const TowerReal& b, const std::optional<Interval>& bv);

/// Degree and critical value of D_{p_n} as seen from step n: the orbit-step
/// override when present, otherwise the per-index parameters.
struct LandingData {
  TowerReal d;
  std::optional<double> d_exact;  // the degree itself when it is a double
  Complex w_offset{};        // w_{p_n} - 1/2
  double w_offset_bound = 0; // |w_{p_n} - 1/2 - w_offset| bound
};
LandingData landing_data(int n, const PullbackCertificate& cert, const ParameterSet& params);

/// Enclosure of f^{n+1}(U_n) given f^n(U_n) within `image_radius` of
/// z_{p_n}: the power map sends it into |zeta| <= (image_radius + eps)^d,
/// where rho is affine. Radius delta * (image_radius + eps)^d about w_{p_n}.
DiskEnclosure schwarz_landing(int n, const PullbackCertificate& cert,
                              const ParameterSet& params,
                              double image_radius = kLandingRadius);

// ------------------------------------------------------------- adjustment

struct LandingCheck {
  int n = 0;
  int target = 0;
  Regime regime = Regime::symbolic;
  std::optional<long> p;
  TowerReal d_before;
  TowerReal d_after;
  bool enlarged = false;
  Complex w_before{};
  Complex w_after{};
  DiskEnclosure landing;           // with the 1/4 landing radius
  DiskEnclosure chain_landing;     // with the measured boundary image (concrete)
  CertifiedOrdering nested = CertifiedOrdering::indeterminate;        // -ln r_land vs -ln r_inner(target)
  CertifiedOrdering chain_nested = CertifiedOrdering::indeterminate;
  std::optional<Interval> log_margin;  // ln r_inner(target) - ln r_land when representable
  double correction = 0.0;         // |w_after - w_before| / delta, rounded up
  bool pass = false;
};

struct AdjustmentResult {
  ParameterSet params;
  std::vector<PullbackCertificate> certificates;  // n = 1..N+1 (targets included)
  std::vector<LandingCheck> steps;                // n = 1..N
  double budget_used = 0.0;
  bool pass = false;
};

/// Target index for the landing of U_n (default n + 1).
using TargetRule = std::function<int(int)>;

/// Enlarges d_{p_n} until the landing nests inside U_{target(n)} and sets
/// w_{p_n} to the center of that disk, for n = 1..N. Throws
/// CertificationError on budget exhaustion (with the step) and
/// PreconditionError when an existing degree lies below the schedule.
AdjustmentResult adjust_parameters(const ParameterSet& params, int N,
                                   const TargetRule& target = {});

// ------------------------------------------------------------------- json

nlohmann::json interval_to_json(const Interval& x);
nlohmann::json to_json(const EscapeVerdict& v);
nlohmann::json to_json(const OrbitRecord& r);
nlohmann::json to_json(const IndexSelection& s);
nlohmann::json to_json(const PullbackCertificate& c);
nlohmann::json to_json(const DiskEnclosure& d);
nlohmann::json to_json(const LandingCheck& c);
nlohmann::json to_json(const AdjustmentResult& r);

}  // namespace wanderlab
