#include "wanderlab/tower.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wanderlab/errors.hpp"

namespace wanderlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Applies exp `times` times to an index interval (saturating at +inf).
Interval exp_iter(Interval x, int times) {
  for (int i = 0; i < times; ++i) {
    x = exp(x);
    if (std::isinf(x.lo())) break;
  }
  return x;
}

TowerReal with_sign(TowerReal t, int sign) {
  if (t.sign != 0) t.sign = sign;
  return t;
}

TowerReal magnitude(const TowerReal& a) { return with_sign(a, a.sign == 0 ? 0 : 1); }

// Natural log of a positive tower: a tower when the value is certainly > 1,
// otherwise a plain interval.
struct LogValue {
  bool is_tower;
  TowerReal tower;
  Interval real;
};

LogValue log_value(const TowerReal& a) {
  if (a.sign <= 0) throw DomainError("log of non-positive tower");
  if (auto v = tw_to_interval(a)) {
    if (v->lo() <= 0.0) throw DomainError("log of tower enclosure touching zero");
    return {false, {}, log(*v)};
  }
  return {true, tw_ln(a), {}};
}

TowerReal as_tower(const LogValue& v) {
  return v.is_tower ? v.tower : tw_from_interval(v.real);
}

CertifiedOrdering compare_intervals(const Interval& a, const Interval& b) {
  if (a.certainly_less(b)) return CertifiedOrdering::certainly_less;
  if (a.certainly_greater(b)) return CertifiedOrdering::certainly_greater;
  return CertifiedOrdering::indeterminate;
}

CertifiedOrdering reverse(CertifiedOrdering o) {
  switch (o) {
    case CertifiedOrdering::certainly_less:
      return CertifiedOrdering::certainly_greater;
    case CertifiedOrdering::certainly_greater:
      return CertifiedOrdering::certainly_less;
    default:
      return o;
  }
}

}  // namespace

TowerReal tw_zero() { return {}; }

TowerReal tw_normalize(int sign, int level, Interval index) {
  if (sign == 0) return tw_zero();
  if (level < 0) throw DomainError("negative tower level");
  if (std::isnan(index.lo()) || std::isnan(index.hi())) {
    throw DomainError("NaN tower index");
  }
  // Magnitudes are nonnegative; a rounded-below-zero level-0 endpoint is 0.
  if (level == 0 && index.lo() < 0.0) {
    if (index.hi() < 0.0) throw DomainError("negative tower magnitude");
    index = Interval(0.0, index.hi());
  }
  for (;;) {
    if (index.lo() >= 1.0) {
      if (level >= TowerReal::kMaxLevel) {
        throw LevelOverflow("tower level cap exceeded");
      }
      index = log(index);
      ++level;
    } else if (level > 0 && index.lo() < 0.0) {
      index = exp(index);
      --level;
    } else {
      break;
    }
  }
  return {sign, level, index};
}

TowerReal tw_from_real(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("tw_from_real requires a finite nonnegative value");
  }
  if (x == 0.0) return tw_zero();
  return tw_normalize(1, 0, Interval(x));
}

TowerReal tw_from_interval(const Interval& x) {
  if (x.lo() == 0.0 && x.hi() == 0.0) return tw_zero();
  if (x.lo() >= 0.0) return tw_normalize(1, 0, x);
  if (x.hi() <= 0.0) return tw_normalize(-1, 0, -x);
  throw DomainError("tower sign indeterminate for " + x.str());
}

std::optional<Interval> tw_to_interval(const TowerReal& a, double limit) {
  if (a.sign == 0) return Interval(0.0);
  Interval m = a.index;
  for (int i = 0; i < a.level; ++i) {
    if (m.hi() > 710.0) return std::nullopt;
    m = exp(m);
  }
  if (!(m.hi() <= limit)) return std::nullopt;
  return a.sign > 0 ? m : -m;
}

TowerReal tw_exp(const TowerReal& a) {
  if (a.sign == 0) return tw_from_real(1.0);
  if (a.sign > 0) {
    if (a.level + 1 > TowerReal::kMaxLevel) {
      throw LevelOverflow("tower level cap exceeded in tw_exp");
    }
    // exp(exp^l(m)) = exp^(l+1)(m): a pure level shift.
    return tw_normalize(1, a.level + 1, a.index);
  }
  if (auto v = tw_to_interval(a)) return tw_from_interval(exp(*v));
  return tw_from_interval(Interval(0.0, kAbsorptionBound));
}

TowerReal tw_ln(const TowerReal& a) {
  const bool greater_than_one =
      a.sign > 0 && (a.level >= 2 || (a.level == 1 && a.index.lo() > 0.0));
  if (!greater_than_one) throw DomainError("tw_ln requires a value certainly > 1");
  return tw_normalize(1, a.level - 1, a.index);
}

CertifiedOrdering tw_cmp(const TowerReal& a, const TowerReal& b) {
  if (a.sign != b.sign) {
    return a.sign < b.sign ? CertifiedOrdering::certainly_less
                           : CertifiedOrdering::certainly_greater;
  }
  if (a.sign == 0) return CertifiedOrdering::certainly_equal;
  if (a.sign < 0) return reverse(tw_cmp(magnitude(a), magnitude(b)));
  if (a.level == b.level && a.index.is_point() && a.index == b.index) {
    return CertifiedOrdering::certainly_equal;
  }
  if (a.level == b.level) return compare_intervals(a.index, b.index);
  // Bring the higher-level operand down to the common level; exp is
  // monotone and outward-rounded, so the comparison stays sound.
  if (a.level > b.level) {
    return compare_intervals(exp_iter(a.index, a.level - b.level), b.index);
  }
  return compare_intervals(a.index, exp_iter(b.index, b.level - a.level));
}

bool tw_certainly_greater(const TowerReal& a, const TowerReal& b) {
  return tw_cmp(a, b) == CertifiedOrdering::certainly_greater;
}

TowerReal tw_hull(const TowerReal& a, const TowerReal& b) {
  if (a.sign == 0) return b.sign == 0 ? a : tw_hull(b, a);
  if (b.sign == 0) {
    // Hull with zero: widen the lower endpoint to 0 at level 0.
    if (a.sign < 0) throw DomainError("tw_hull of negative tower with zero");
    return tw_normalize(1, 0, Interval(0.0, exp_iter(a.index, a.level).hi()));
  }
  if (a.sign != b.sign) throw DomainError("tw_hull of opposite signs");
  const int level = std::min(a.level, b.level);
  const Interval ia = exp_iter(a.index, a.level - level);
  const Interval ib = exp_iter(b.index, b.level - level);
  return tw_normalize(a.sign, level, ia.join(ib));
}

TowerReal tw_add_real(const TowerReal& a, const Interval& r) {
  if (r.lo() == 0.0 && r.hi() == 0.0) return a;
  if (auto v = tw_to_interval(a)) return tw_from_interval(*v + r);
  if (!(r.mag() <= 1e200)) {
    throw DomainError("tw_add_real: real summand too large to absorb");
  }
  // |a| > 1e300, so a + r = a (1 + r/a) with |r/a| <= eps.
  const double eps = (Interval(r.mag()) / Interval(kRepresentableLimit)).hi();
  const Interval rel = log1p(Interval(-eps, eps));
  const TowerReal ln_mag = tw_add_real(tw_ln(magnitude(a)), rel);
  return with_sign(tw_exp(ln_mag), a.sign);
}

TowerReal tw_add(const TowerReal& a, const TowerReal& b) {
  if (a.sign < 0 || b.sign < 0) {
    throw DomainError("tw_add is defined for nonnegative operands");
  }
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const auto va = tw_to_interval(a);
  const auto vb = tw_to_interval(b);
  if (va && vb) return tw_from_interval(*va + *vb);

  const CertifiedOrdering ord = tw_cmp(a, b);
  const TowerReal& big = ord == CertifiedOrdering::certainly_less ? b : a;
  const TowerReal& small = ord == CertifiedOrdering::certainly_less ? a : b;
  const bool ordered = ord != CertifiedOrdering::indeterminate;

  const LogValue ln_big = log_value(big);
  const LogValue ln_small = log_value(small);
  // ln(big + small) = ln(big) + ln(1 + small/big).
  if (ordered) {
    if (!ln_big.is_tower && !ln_small.is_tower) {
      const Interval gap = ln_small.real - ln_big.real;
      const Interval ratio = exp(gap);
      return tw_exp(tw_add_real(as_tower(ln_big), log1p(ratio)));
    }
    // Separation of 700 in log space bounds small/big by e^-700 < 1e-300.
    const TowerReal shifted = tw_add_real(as_tower(ln_small), Interval(700.0));
    if (tw_certainly_greater(as_tower(ln_big), shifted)) {
      return tw_exp(tw_add_real(as_tower(ln_big), Interval(0.0, kAbsorptionBound)));
    }
    return tw_exp(tw_add_real(as_tower(ln_big), Interval(0.0, ln2_interval().hi())));
  }
  // Unordered operands: ln(a + b) lies in max(ln a, ln b) + [0, ln 2].
  const TowerReal hull = tw_hull(as_tower(ln_big), as_tower(ln_small));
  return tw_exp(tw_add_real(hull, Interval(0.0, ln2_interval().hi())));
}

TowerReal tw_mul(const TowerReal& a, const TowerReal& b) {
  if (a.sign == 0 || b.sign == 0) return tw_zero();
  const int sign = a.sign * b.sign;
  const TowerReal ma = magnitude(a);
  const TowerReal mb = magnitude(b);
  const auto va = tw_to_interval(ma, 1e150);
  const auto vb = tw_to_interval(mb, 1e150);
  if (va && vb) return with_sign(tw_from_interval(*va * *vb), sign);

  const LogValue la = log_value(ma);
  const LogValue lb = log_value(mb);
  TowerReal sum;
  if (la.is_tower && lb.is_tower) {
    sum = tw_add(la.tower, lb.tower);
  } else if (la.is_tower) {
    sum = tw_add_real(la.tower, lb.real);
  } else if (lb.is_tower) {
    sum = tw_add_real(lb.tower, la.real);
  } else {
    sum = tw_from_interval(la.real + lb.real);
  }
  return with_sign(tw_exp(sum), sign);
}

TowerReal tw_log_lambda_sinh(const TowerReal& x, const Interval& lambda) {
  if (x.sign <= 0) throw DomainError("ln(lambda sinh x) requires x > 0");
  const Interval ln_lambda = log(lambda);
  const Interval ln2 = ln2_interval();
  if (auto xv = tw_to_interval(x)) {
    Interval ln_sinh;
    if (xv->lo() > 20.0) {
      // ln sinh x = x - ln 2 + ln(1 - e^{-2x}).
      const double tail = exp_up(-2.0 * xv->lo());
      ln_sinh = *xv - ln2 + Interval(log1p(Interval(-tail)).lo(), 0.0);
    } else {
      ln_sinh = log(sinh(*xv));
    }
    return tw_from_interval(ln_lambda + ln_sinh);
  }
  return tw_add_real(x, ln_lambda - ln2 + Interval(-kAbsorptionBound, 0.0));
}

TowerReal tw_prototype_step(const TowerReal& x, const Interval& lambda) {
  if (x.sign < 0) throw DomainError("tw_prototype_step requires x >= 0");
  if (x.sign == 0) return tw_from_real(1.0);
  if (auto xv = tw_to_interval(x, 700.0)) {
    const Interval y = lambda * sinh(*xv);
    if (y.hi() < 700.0) return tw_from_interval(cosh(y));
  }
  // ln f = Y - ln 2 + [0, ln(1 + e^{-2Y})] with Y = lambda sinh x.
  const TowerReal l2 = tw_log_lambda_sinh(x, lambda);
  double tail = kAbsorptionBound;
  if (auto l2v = tw_to_interval(l2, 700.0)) {
    const double y_lo = exp_down(l2v->lo());
    tail = std::max(exp_up(-2.0 * y_lo), 0.0);
  }
  const Interval correction = -ln2_interval() + Interval(0.0, tail);
  const TowerReal ln_f = tw_add_real(tw_exp(l2), correction);
  return tw_exp(ln_f);
}

TowerReal tw_prototype_logderiv(const TowerReal& x, const Interval& lambda) {
  if (x.sign <= 0) throw DomainError("logderiv requires x > 0");
  // f'(x) = lambda cosh(x) sinh(lambda sinh x).
  if (auto xv = tw_to_interval(x, 700.0)) {
    const Interval y = lambda * sinh(*xv);
    if (y.hi() < 700.0) {
      return tw_from_interval(log(lambda * cosh(*xv) * sinh(y)));
    }
  }
  const Interval ln2 = ln2_interval();
  const TowerReal l2 = tw_log_lambda_sinh(x, lambda);
  const TowerReal big_y = tw_exp(l2);
  // ln sinh Y = Y - ln 2 + [ln(1 - e^{-2Y}), 0].
  double y_tail = kAbsorptionBound;
  if (auto l2v = tw_to_interval(l2, 700.0)) {
    y_tail = std::max(exp_up(-2.0 * exp_down(l2v->lo())), 0.0);
  }
  const Interval sinh_corr(log1p(Interval(-y_tail)).lo(), 0.0);
  const Interval ln_lambda = log(lambda);
  if (auto xv = tw_to_interval(x)) {
    Interval ln_cosh;
    if (xv->lo() > 20.0) {
      // ln cosh x = x - ln 2 + [0, ln(1 + e^{-2x})].
      ln_cosh = *xv - ln2 + Interval(0.0, exp_up(-2.0 * xv->lo()));
    } else {
      ln_cosh = log(cosh(*xv));
    }
    return tw_add_real(big_y, ln_lambda + ln_cosh - ln2 + sinh_corr);
  }
  const Interval ln_cosh_corr(0.0, kAbsorptionBound);
  return tw_add_real(tw_add(big_y, x),
                     ln_lambda - ln2 - ln2 + ln_cosh_corr + sinh_corr);
}

std::string tw_to_string(const TowerReal& a) {
  std::ostringstream os;
  os.precision(17);
  os << (a.sign > 0 ? "+1" : a.sign < 0 ? "-1" : "0") << " * E^" << a.level
     << '(' << a.index.lo() << ".." << a.index.hi() << ')';
  return os.str();
}

const char* to_string(CertifiedOrdering ord) {
  switch (ord) {
    case CertifiedOrdering::certainly_less:
      return "certainly-less";
    case CertifiedOrdering::certainly_greater:
      return "certainly-greater";
    case CertifiedOrdering::certainly_equal:
      return "certainly-equal";
    case CertifiedOrdering::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace wanderlab
