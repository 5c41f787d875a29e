#pragma once

// Level-index ("tower") arithmetic.
//
// A TowerReal stores sign * exp^level(m) where m is a certified interval.
// Normalization keeps the lower endpoint of m in [0, 1) for level >= 1 and
// the magnitude below 1 at level 0, so ordering reduces to (level, index)
// comparison. Because normalization is driven by the lower endpoint, a wide
// enclosure may have m_hi >= 1 when it straddles a level boundary; the
// represented set is still exactly exp^level([m_lo, m_hi]).
//
// Values that grow like iterated exponentials (the real orbit of the model
// map) stay representable to a depth of kMaxLevel levels.

#include <optional>
#include <string>

#include "wanderlab/interval.hpp"

namespace wanderlab {

struct TowerReal {
  static constexpr int kMaxLevel = 64;

  int sign = 0;   // -1, 0, +1
  int level = 0;  // number of exp applications
  Interval index{0.0};
};

enum class CertifiedOrdering {
  certainly_less,
  certainly_greater,
  certainly_equal,
  indeterminate,
};

/// Magnitude limit below which tower values are also handled as plain
/// interval doubles.
inline constexpr double kRepresentableLimit = 1e300;

/// Exact-absorption bound: when the smaller term's relative contribution is
/// below this, addition widens the dominant operand by at most this much.
inline constexpr double kAbsorptionBound = 1e-300;

TowerReal tw_zero();
TowerReal tw_from_real(double x);
/// Signed enclosure to tower; rejects intervals that straddle zero unless
/// they are exactly [0, 0] or nonnegative.
TowerReal tw_from_interval(const Interval& x);
/// Re-normalizes a (sign, level, index) triple.
TowerReal tw_normalize(int sign, int level, Interval index);

/// Signed value as a plain interval when its magnitude is at most `limit`.
std::optional<Interval> tw_to_interval(const TowerReal& a,
                                       double limit = kRepresentableLimit);

TowerReal tw_exp(const TowerReal& a);
TowerReal tw_ln(const TowerReal& a);
CertifiedOrdering tw_cmp(const TowerReal& a, const TowerReal& b);
TowerReal tw_mul(const TowerReal& a, const TowerReal& b);
TowerReal tw_add(const TowerReal& a, const TowerReal& b);
/// a + r for a (possibly huge) tower and a small signed real interval.
TowerReal tw_add_real(const TowerReal& a, const Interval& r);
/// Enclosure of both operands (same sign required).
TowerReal tw_hull(const TowerReal& a, const TowerReal& b);

bool tw_certainly_greater(const TowerReal& a, const TowerReal& b);

/// Enclosure of cosh(lambda * sinh(x)) for x >= 0.
TowerReal tw_prototype_step(const TowerReal& x, const Interval& lambda);
/// Enclosure of ln(d/dx cosh(lambda * sinh(x))) for x > 0.
TowerReal tw_prototype_logderiv(const TowerReal& x, const Interval& lambda);
/// Enclosure of ln(lambda * sinh(x)) for x > 0.
TowerReal tw_log_lambda_sinh(const TowerReal& x, const Interval& lambda);

/// Debug form `sign * E^level(m_lo..m_hi)`.
std::string tw_to_string(const TowerReal& a);

const char* to_string(CertifiedOrdering ord);

}  // namespace wanderlab
