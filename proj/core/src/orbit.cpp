#include "wanderlab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace wanderlab {
namespace {

constexpr double kDenormMin = std::numeric_limits<double>::denorm_min();

Interval lambda_checked(const ParameterSet& params) {
  params.validate();
  const Interval lambda = params.lambda_interval();
  if (lambda.lo() < 10.0) {
    throw PreconditionError(
        "lambda must be at least 10: with the identity as correction, "
        "dphi/dx = 1 must dominate 10/lambda");
  }
  return lambda;
}

bool greater(CertifiedOrdering o) { return o == CertifiedOrdering::certainly_greater; }

// ln f'(a) > ln(100 b) and ln f(a) > ln(50 b^2) for a box [a, b] with a >= 1.
// f' and f are increasing on [0, inf), so the values at a bound the box.
bool escape_box(double a, double b, const Interval& lambda, bool& used_tower) {
  const Interval ia(a);
  const Interval ib(b);
  const Interval y = lambda * sinh(ia);
  if (y.hi() < 700.0) {
    const Interval fp = lambda * cosh(ia) * sinh(y);
    const Interval fv = cosh(y);
    const Interval need_fp = Interval(100.0) * ib;
    const Interval need_f = Interval(50.0) * sqr(ib) - Interval(1.0);
    return fp.certainly_greater(need_fp) && fv.certainly_greater(need_f);
  }
  used_tower = true;
  const TowerReal ta = tw_from_real(a);
  const TowerReal ln_fp = tw_prototype_logderiv(ta, lambda);
  const TowerReal ln_f = tw_ln(tw_prototype_step(ta, lambda));
  const Interval lb = log(ib);
  const TowerReal need_fp = tw_from_interval(log(Interval(100.0)) + lb);
  const TowerReal need_f = tw_from_interval(log(Interval(50.0)) + Interval(2.0) * lb);
  // f(a) >= 50 b^2 implies f(a) >= 50 b^2 - 1.
  return greater(tw_cmp(ln_fp, need_fp)) && greater(tw_cmp(ln_f, need_f));
}

Interval log_inner_factor() { return log(Interval(kInnerRadiusFactor)); }
Interval log_outer_factor() { return log(Interval(kOuterRadiusFactor)); }

// exp(-t) as an interval when t is a representable nonnegative tower.
std::optional<Interval> exp_neg(const TowerReal& t) {
  if (auto v = tw_to_interval(t, 745.0)) return exp(-*v);
  return std::nullopt;
}

// A point tower strictly above `a`: the index upper endpoint moved up by a
// relative 2^-20 at the tower's own level. Used where the operands are far
// beyond the double range and a few ulps of index carry no information.
TowerReal nudge_up(const TowerReal& a) {
  const double hi = a.index.hi();
  const double bumped = std::nextafter(hi + std::ldexp(std::max(hi, 1e-300), -20),
                                       std::numeric_limits<double>::infinity());
  return tw_normalize(1, a.level, Interval(bumped));
}

struct ComplexMap {
  Complex value;
  Complex derivative;
};

// f^n(z) and (f^n)'(z) in double complex arithmetic.
ComplexMap iterate_strip(Complex z, int n, const ParameterSet& params) {
  const double lambda = params.lambda();
  Complex deriv(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    const Complex s = lambda * std::sinh(z);
    deriv *= lambda * std::cosh(z) * std::sinh(s);
    z = strip_map(z, params);
  }
  return {z, deriv};
}

CInterval interval_step(const CInterval& z, const Interval& lambda) {
  return cosh(lambda * sinh(z));
}

// Interval image of the circle |z - c| = r under f^n, as the largest
// distance from `target`.
BoundaryImage boundary_image(Complex c, double r, int n, Complex target,
                             const ParameterSet& params, long boxes) {
  const Interval lambda = params.lambda_interval();
  BoundaryImage out;
  out.boxes = boxes;
  const double dtheta = 2.0 * M_PI / static_cast<double>(boxes);
  // Each arc lies within its arc length of its start point; the extra term
  // covers the rounding of the start point itself.
  const double reach = r * dtheta * (1.0 + 1e-9) + 8.0 * std::numeric_limits<double>::epsilon() *
                                                       (std::abs(c) + r);
  const CInterval tgt(target);
  double worst = 0.0;
  for (long j = 0; j < boxes; ++j) {
    const double theta = dtheta * static_cast<double>(j);
    const Complex p = c + std::polar(r, theta);
    CInterval box(Interval(p.real() - reach, p.real() + reach),
                  Interval(p.imag() - reach, p.imag() + reach));
    for (int k = 0; k < n; ++k) box = interval_step(box, lambda);
    worst = std::max(worst, (box - tgt).modulus().hi());
  }
  out.max_distance = worst;
  out.margin = (Interval(kLandingRadius) - Interval(worst)).lo();
  out.pass = worst < kLandingRadius;
  return out;
}

}  // namespace

// ------------------------------------------------------------------ escape

EscapeVerdict check_escape_condition(const ParameterSet& params, double X) {
  if (!std::isfinite(X) || X < 0.0) {
    throw DomainError("check_escape_condition: X must be finite and >= 0");
  }
  const Interval lambda = lambda_checked(params);
  EscapeVerdict v;
  v.X = X;
  v.lambda_sq = sqr(lambda);
  // sinh t >= t and cosh t >= 1 + t^2/2 give f'(x) >= lambda^2 x and
  // f(x) >= 1 + lambda^2 x^2 / 2, both enough once lambda^2 >= 100.
  v.minorant_pass = v.lambda_sq.lo() >= 100.0;
  if (!v.minorant_pass) {
    v.detail = "lambda^2 < 100: the minorant does not apply";
    return v;
  }
  bool ok = true;
  if (X > 1.0) {
    std::vector<std::pair<double, double>> stack{{1.0, X}};
    while (!stack.empty() && ok) {
      auto [a, b] = stack.back();
      stack.pop_back();
      ++v.boxes;
      bool used_tower = false;
      if (escape_box(a, b, lambda, used_tower)) {
        if (used_tower) ++v.tower_boxes;
        continue;
      }
      const double mid = b > 4.0 * a ? std::sqrt(a) * std::sqrt(b) : 0.5 * (a + b);
      if (!(mid > a && mid < b) || v.boxes > 1000000) {
        ok = false;
        v.detail = "subdivision did not resolve the box [" + std::to_string(a) + ", " +
                   std::to_string(b) + "]";
        break;
      }
      stack.push_back({mid, b});
      stack.push_back({a, mid});
    }
  }
  v.pass = ok;
  if (ok) v.detail = "minorant on [0, 1], monotone subdivision beyond";
  return v;
}

// ------------------------------------------------------------------- orbit

Interval factorial_growth_bound(int n) {
  if (n < 0) throw DomainError("factorial_growth_bound: n must be >= 0");
  Interval s = Interval(static_cast<double>(n)) * log(Interval(kOrbitDerivative));
  for (int j = 2; j <= n; ++j) s += log(Interval(static_cast<double>(j)));
  return s;
}

std::vector<OrbitRecord> iterate_orbit(const ParameterSet& params, int N) {
  if (N < 0) throw PreconditionError("iterate_orbit: N must be >= 0");
  const Interval lambda = lambda_checked(params);
  const TowerReal ln50 = tw_from_interval(log(Interval(kOrbitDerivative)));
  std::vector<OrbitRecord> out;
  out.reserve(static_cast<size_t>(N) + 1);
  OrbitRecord rec;
  rec.k = 0;
  rec.x = tw_from_real(0.5);
  rec.logderiv = tw_zero();
  for (int k = 0; k < N; ++k) {
    const TowerReal next = tw_prototype_step(rec.x, lambda);
    rec.step_logderiv = tw_prototype_logderiv(rec.x, lambda);
    rec.spacing = tw_cmp(next, tw_add_real(rec.x, Interval(kOrbitSpacing)));
    rec.derivative = tw_cmp(rec.step_logderiv, ln50);
    if (!rec.spacing_ok()) {
      throw CertificationError(std::string("orbit spacing not certified: ") +
                                   to_string(*rec.spacing),
                               k);
    }
    if (!rec.derivative_ok()) {
      throw CertificationError(std::string("orbit derivative not certified: ") +
                                   to_string(*rec.derivative),
                               k);
    }
    OrbitRecord following;
    following.k = k + 1;
    following.x = next;
    following.logderiv = tw_add(rec.logderiv, rec.step_logderiv);
    out.push_back(rec);
    rec = following;
  }
  out.push_back(rec);
  return out;
}

// ------------------------------------------------------------------- index

Interval index_gap_bound() {
  return (pi_interval() + Interval(0.1)) / Interval(2.0);
}

IndexSelection select_p(int n, const std::vector<OrbitRecord>& orbit,
                        const AnchorTable& anchors) {
  if (n < 1 || static_cast<size_t>(n) >= orbit.size()) {
    throw PreconditionError("select_p: orbit not available through step " + std::to_string(n));
  }
  IndexSelection s;
  s.n = n;
  const TowerReal& x = orbit[n].x;
  s.proxy = tw_mul(x, tw_from_interval(Interval(1.0) / pi_interval()));
  const double limit = static_cast<double>(kMaxAnchorIndex - 1) * M_PI;
  const auto xv = tw_to_interval(x, limit);
  if (!xv) {
    // Consecutive anchors are spaced within pi +- 1/10, so the nearest one
    // lies within (pi + 1/10)/2 of any point beyond a_1.
    s.gap_asserted = true;
    return s;
  }
  const long m0 = std::max(1L, static_cast<long>(std::floor(xv->lo() / M_PI)));
  long best = m0;
  Interval best_gap = abs(*xv - anchors.get(m0).a_enclosure);
  for (long m = m0 + 1; m <= m0 + 1; ++m) {
    const Interval g = abs(*xv - anchors.get(m).a_enclosure);
    if (g.certainly_less(best_gap)) {
      best = m;
      best_gap = g;
    } else if (!best_gap.certainly_less(g)) {
      s.tie_broken = true;  // keep the smaller index
    }
  }
  s.p = best;
  s.gap = best_gap;
  s.gap_certified = best_gap.certainly_less(index_gap_bound());
  return s;
}

// ------------------------------------------------------------------- Koebe

const char* to_string(Regime r) {
  return r == Regime::concrete ? "concrete" : "symbolic";
}

// ---------------------------------------------------------------- pullback

PullbackCertificate build_U(int n, const std::vector<OrbitRecord>& orbit,
                            const ParameterSet& params, const AnchorTable& anchors) {
  if (n < 1 || static_cast<size_t>(n) >= orbit.size()) {
    throw PreconditionError("build_U: orbit not available through step " + std::to_string(n));
  }
  PullbackCertificate c;
  c.n = n;
  c.index = select_p(n, orbit, anchors);

  const TowerReal& L = orbit[n].logderiv;
  c.neg_log_inner = tw_add_real(L, -log_inner_factor());
  c.neg_log_outer = tw_add_real(L, -log_outer_factor());
  if (auto lv = tw_to_interval(L, 1e300)) c.neg_log_inner_value = *lv - log_inner_factor();

  const KoebeFactors<Interval> k = koebe_factors(Interval(0.5));
  const Interval inner = koebe_inner_constant<Interval>();
  const Interval outer = koebe_outer_constant<Interval>();
  c.koebe_chain = {{"quarter", k.quarter},
                   {"landing_radius", Interval(kLandingRadius)},
                   {"deriv_min(1/2)", k.deriv_min},
                   {"inner_constant", inner},
                   {"growth_max(1/2)", k.growth_max},
                   {"branch_radius", Interval(10.0)},
                   {"outer_constant", outer}};
  const bool constants_ok = inner.certainly_greater(Interval(kInnerRadiusFactor)) &&
                            !outer.certainly_greater(Interval(kOuterRadiusFactor));

  bool steps_ok = true;
  const TowerReal eleven = tw_from_real(kOrbitSpacing);
  for (int j = 1; j <= n; ++j) {
    PullbackStep st;
    st.k = j;
    st.clear_of_unit_disk = tw_cmp(orbit[j].x, eleven);
    st.derivative = orbit[j - 1].derivative.value_or(CertifiedOrdering::indeterminate);
    steps_ok = steps_ok && greater(st.clear_of_unit_disk) && greater(st.derivative);
    c.steps.push_back(st);
  }

  // |z_p - x_n| <= sqrt(gap^2 + pi^2); with the landing radius it must stay
  // inside D(x_n, 5), where the inverse branch is controlled.
  const Interval gap = c.index.p ? c.index.gap : index_gap_bound();
  const Interval reach = sqrt(sqr(gap) + sqr(pi_interval())) + Interval(kLandingRadius);
  c.landing_inside_branch = reach.certainly_less(Interval(5.0))
                                ? CertifiedOrdering::certainly_less
                                : CertifiedOrdering::indeterminate;
  const bool gap_ok = c.index.gap_certified || c.index.gap_asserted;

  const auto r_in = exp_neg(c.neg_log_inner);
  const auto r_out = exp_neg(c.neg_log_outer);
  if (r_in) c.radius_inner = r_in->lo();
  if (r_out) c.radius_outer = r_out->hi();

  bool concrete_ok = true;
  if (c.index.p && r_in && c.radius_inner > 0.0) {
    try {
      const AnchorData& anchor = anchors.get(*c.index.p);
      const Complex target(anchor.a, M_PI);
      Complex z(0.5, 0.0);
      for (int it = 0; it < 80; ++it) {
        const ComplexMap m = iterate_strip(z, n, params);
        const Complex step = (m.value - target) / m.derivative;
        z -= step;
        if (std::abs(step) <= 1e-3 * std::numeric_limits<double>::epsilon()) break;
      }
      c.regime = Regime::concrete;
      c.center_offset = z - Complex(0.5, 0.0);
      c.center_offset_bound =
          (abs(Interval(c.center_offset.real())) + abs(Interval(c.center_offset.imag()))).hi();
      c.image = boundary_image(z, c.radius_inner, n, target, params, 256);
      // U_n must also sit inside the outer disk about 1/2.
      const Interval off = CInterval(c.center_offset).modulus() + Interval(c.radius_inner);
      concrete_ok = c.image->pass && off.certainly_less(Interval(c.radius_outer));
    } catch (const RangeError&) {
      c.regime = Regime::symbolic;
      c.image.reset();
    }
  }
  if (c.regime == Regime::symbolic) {
    c.center_offset = {};
    c.center_offset_bound = r_out ? c.radius_outer : kDenormMin;
  }
  c.pass = constants_ok && steps_ok && gap_ok &&
           c.landing_inside_branch == CertifiedOrdering::certainly_less && concrete_ok;
  return c;
}

// ----------------------------------------------------------------- landing

const char* to_string(DiskEnclosure::Anchor a) {
  switch (a) {
    case DiskEnclosure::Anchor::orbit_point:
      return "orbit-point";
    case DiskEnclosure::Anchor::disk_index:
      return "disk-index";
    case DiskEnclosure::Anchor::base_point:
      return "base-point";
  }
  return "base-point";
}

const char* to_string(DiskEnclosure::Rigor r) {
  return r == DiskEnclosure::Rigor::certified_interval ? "certified-interval" : "sampled";
}

CertifiedOrdering compare_log_radii(const TowerReal& a, const std::optional<Interval>& av,
                                    const TowerReal& b, const std::optional<Interval>& bv) {
  if (av && bv) {
    if (av->certainly_greater(*bv)) return CertifiedOrdering::certainly_greater;
    if (av->certainly_less(*bv)) return CertifiedOrdering::certainly_less;
    return CertifiedOrdering::indeterminate;
  }
  return tw_cmp(a, b);
}

LandingData landing_data(int n, const PullbackCertificate& cert, const ParameterSet& params) {
  LandingData out;
  if (cert.index.p) {
    const double d = params.d(*cert.index.p);
    if (std::isfinite(d)) out.d_exact = d;
  }
  if (auto it = params.orbit_overrides.find(n); it != params.orbit_overrides.end()) {
    out.d = it->second.d;
    out.w_offset = it->second.w_offset;
    out.w_offset_bound = it->second.w_offset_bound;
    return out;
  }
  if (cert.index.p) {
    out.d = params.d_tower(*cert.index.p);
    out.w_offset = params.w(*cert.index.p) - Complex(0.5, 0.0);
    return out;
  }
  // Schedule degree at an index within one of x_n / pi:
  // ln d in ln 2 + alpha (x_n/pi + [-1, 1]) - [0, 1e-300].
  const Interval alpha(params.alpha);
  const TowerReal scaled = tw_mul(cert.index.proxy, tw_from_interval(alpha));
  const Interval shift =
      ln2_interval() + alpha * Interval(-1.0, 1.0) + Interval(-kAbsorptionBound, 0.0);
  out.d = tw_exp(tw_add_real(scaled, shift));
  return out;
}

DiskEnclosure schwarz_landing(int n, const PullbackCertificate& cert,
                              const ParameterSet& params, double image_radius) {
  if (!cert.pass) {
    throw PreconditionError("schwarz_landing: pullback certificate for step " +
                            std::to_string(n) + " did not pass");
  }
  if (!(image_radius > 0.0 && image_radius <= kLandingRadius)) {
    throw DomainError("schwarz_landing: image radius must lie in (0, 1/4]");
  }
  const LandingData data = landing_data(n, cert, params);
  const Interval base = Interval(image_radius) + Interval(params.correction_budget);
  const Interval ell = -log(base);  // > 0
  const Interval neg_log_delta = -log(Interval(params.delta()));
  DiskEnclosure e;
  e.anchor = DiskEnclosure::Anchor::base_point;
  e.anchor_index = cert.index.p.value_or(0);
  e.offset_center = data.w_offset;
  // (z - z_p)^d has modulus <= base^d <= 3/4, where rho is delta zeta + w.
  e.neg_log_radius = tw_add_real(tw_mul(data.d, tw_from_interval(ell)), neg_log_delta);
  if (data.d_exact) {
    e.neg_log_radius_value = Interval(*data.d_exact) * ell + neg_log_delta;
  } else if (auto dv = tw_to_interval(data.d, 1e300)) {
    e.neg_log_radius_value = *dv * ell + neg_log_delta;
  }
  if (auto r = exp_neg(e.neg_log_radius)) e.radius = r->hi();
  e.rigor = DiskEnclosure::Rigor::certified_interval;
  return e;
}

// -------------------------------------------------------------- adjustment

AdjustmentResult adjust_parameters(const ParameterSet& params, int N,
                                   const TargetRule& target) {
  if (N < 0) throw PreconditionError("adjust_parameters: N must be >= 0");
  AdjustmentResult res;
  res.params = params;
  res.params.validate();
  if (N == 0) {
    res.pass = true;
    return res;
  }
  auto target_of = [&](int n) {
    const int t = target ? target(n) : n + 1;
    if (t < 1) throw PreconditionError("adjust_parameters: target index must be >= 1");
    return t;
  };
  int depth = N;
  for (int n = 1; n <= N; ++n) depth = std::max(depth, target_of(n));

  const std::vector<OrbitRecord> orbit = iterate_orbit(params, depth);
  const AnchorTable anchors(params.lambda_over_pi);
  for (int n = 1; n <= depth; ++n) {
    res.certificates.push_back(build_U(n, orbit, params, anchors));
  }

  const Interval delta(params.delta());
  const Interval ell = -log(Interval(kLandingRadius) + Interval(params.correction_budget));
  bool all = true;
  for (int n = 1; n <= N; ++n) {
    const PullbackCertificate& cert = res.certificates[n - 1];
    const int t = target_of(n);
    const PullbackCertificate& goal = res.certificates[t - 1];

    LandingCheck step;
    step.n = n;
    step.target = t;
    step.p = cert.index.p;
    const LandingData before = landing_data(n, cert, res.params);
    step.d_before = before.d;
    step.w_before = Complex(0.5, 0.0) + before.w_offset;

    // A degree never moves below the schedule.
    if (cert.index.p) {
      ParameterSet base;
      base.lambda_over_pi = params.lambda_over_pi;
      base.alpha = params.alpha;
      const double schedule = base.d(*cert.index.p);
      if (std::isfinite(schedule) &&
          tw_cmp(before.d, tw_from_real(schedule)) == CertifiedOrdering::certainly_less) {
        throw PreconditionError("degree override for disk " + std::to_string(*cert.index.p) +
                                " lies below the schedule");
      }
    }

    // Nesting needs d * ell > -ln r_inner(t) + ln delta =: A.
    const TowerReal A = goal.neg_log_inner_value
                            ? tw_from_interval(*goal.neg_log_inner_value + log(delta))
                            : tw_add_real(goal.neg_log_inner, log(delta));
    const TowerReal ell_t = tw_from_interval(ell);
    TowerReal d_after = before.d;
    if (!greater(tw_cmp(tw_mul(before.d, ell_t), A))) {
      if (auto av = tw_to_interval(A, 1e300)) {
        double d = (Interval(av->hi()) / ell).hi();
        const double two53 = 9007199254740992.0;
        d = d < two53 ? 2.0 * std::ceil(d / 2.0) : std::ceil(d);
        while (!(Interval(d) * ell).certainly_greater(*av)) {
          d = d < two53 ? d + 2.0 : std::nextafter(d, std::numeric_limits<double>::infinity());
        }
        d_after = tw_from_real(d);
      } else {
        TowerReal d = nudge_up(tw_mul(A, tw_from_interval(Interval(1.0) / ell)));
        for (int tries = 0; tries < 8 && !greater(tw_cmp(tw_mul(d, ell_t), A)); ++tries) {
          d = nudge_up(d);
        }
        d_after = d;
      }
      step.enlarged = true;
    }
    step.d_after = d_after;

    // Re-target w_{p_n} to the center of the goal disk.
    step.w_after = goal.center();
    const Interval shift = CInterval(step.w_after - step.w_before).modulus() +
                           Interval(goal.regime == Regime::symbolic ? goal.center_offset_bound
                                                                    : 0.0);
    step.correction = (shift / delta).hi();
    res.budget_used = (Interval(res.budget_used) + Interval(step.correction)).hi();
    if (res.budget_used > params.correction_budget) {
      throw CertificationError("correction budget exhausted", n);
    }

    OrbitStepOverride ov;
    ov.d = d_after;
    ov.w_offset = goal.center_offset;
    ov.w_offset_bound = goal.regime == Regime::symbolic ? goal.center_offset_bound : 0.0;
    res.params.orbit_overrides[n] = ov;
    if (cert.index.p) {
      if (auto dv = tw_to_interval(d_after, std::numeric_limits<double>::max())) {
        res.params.d_overrides[*cert.index.p] = dv->hi();
      }
      res.params.w_overrides[*cert.index.p] = step.w_after;
    }

    step.regime = cert.regime;
    step.landing = schwarz_landing(n, cert, res.params);
    step.nested = compare_log_radii(step.landing.neg_log_radius, step.landing.neg_log_radius_value,
                                    goal.neg_log_inner, goal.neg_log_inner_value);
    bool ok = cert.pass && goal.pass && greater(step.nested);
    if (cert.image) {
      step.chain_landing = schwarz_landing(n, cert, res.params, cert.image->max_distance);
      step.chain_nested =
          compare_log_radii(step.chain_landing.neg_log_radius,
                            step.chain_landing.neg_log_radius_value, goal.neg_log_inner,
                            goal.neg_log_inner_value);
      ok = ok && greater(step.chain_nested);
    }
    if (step.landing.neg_log_radius_value && goal.neg_log_inner_value) {
      step.log_margin = *step.landing.neg_log_radius_value - *goal.neg_log_inner_value;
    }
    step.pass = ok;
    all = all && ok;
    res.steps.push_back(std::move(step));
  }
  res.params.validate();
  res.pass = all;
  return res;
}

}  // namespace wanderlab
