#include <doctest.h>

#include <cmath>

#include <boost/rational.hpp>

#include "oracles.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/orbit.hpp"

using namespace wanderlab;
using oracle::Big;

namespace {

ParameterSet params_for(long K) {
  ParameterSet p;
  p.lambda_over_pi = K;
  return p;
}

bool encloses(const Interval& x, const Big& v) { return Big(x.lo()) <= v && v <= Big(x.hi()); }

bool tower_encloses(const TowerReal& t, const Big& v) {
  const auto iv = tw_to_interval(t);
  REQUIRE(iv.has_value());
  return encloses(*iv, v);
}

/// x_1 = f(1/2) for lambda = 4 pi.
Big orbit_x1() { return cosh(oracle::lambda_of(4) * sinh(Big(0.5))); }

/// ln f'(x) = ln(lambda cosh x sinh(lambda sinh x)), for large x in the
/// asymptotic form ln lambda + ln cosh x + s - ln 2 + ln(1 - e^{-2s}).
Big log_fprime(const Big& x) {
  const Big lam = oracle::lambda_of(4);
  const Big s = lam * sinh(x);
  return log(lam) + log(cosh(x)) + s - log(Big(2)) + log1p(-exp(-2 * s));
}

}  // namespace

TEST_SUITE("orbit") {
  TEST_CASE("escape condition on [0, 1e300]") {
    const EscapeVerdict v = check_escape_condition(params_for(4), 1e300);
    CHECK(v.pass);
    CHECK(v.minorant_pass);
    CHECK(v.lambda_sq.lo() >= 100.0);
    CHECK(v.boxes > 0);
    CHECK(check_escape_condition(params_for(10), 1e300).pass);
    CHECK_THROWS_AS(check_escape_condition(params_for(1), 1e3), PreconditionError);
  }

  TEST_CASE("first orbit points against the multiprecision reference") {
    oracle::Precision prec(200);
    const auto orbit = iterate_orbit(params_for(4), 2);
    REQUIRE(orbit.size() == 3);
    CHECK(tower_encloses(orbit[0].x, Big(0.5)));
    const Big x1 = orbit_x1();
    CHECK(tower_encloses(orbit[1].x, x1));
    CHECK(static_cast<double>(x1) == doctest::Approx(349.0).epsilon(1e-3));
    // x_2 = cosh(lambda sinh x_1): ln x_2 = s - ln 2 + ln(1 + e^{-2s}).
    const Big s = oracle::lambda_of(4) * sinh(x1);
    CHECK(orbit[2].x.level == 5);
    CHECK(tower_encloses(tw_ln(orbit[2].x), s - log(Big(2))));
    // Accumulated log-derivatives.
    const Big l1 = log(oracle::prototype_derivative(oracle::BigC(Big(0.5), Big(0)),
                                                     oracle::lambda_of(4)).re);
    CHECK(tower_encloses(orbit[1].logderiv, l1));
    CHECK(std::exp(static_cast<double>(l1)) == doctest::Approx(4945).epsilon(1e-3));
    CHECK(tower_encloses(orbit[2].logderiv, l1 + log_fprime(x1)));
    CHECK(tw_cmp(orbit[2].logderiv, tw_from_real(std::log(5000.0))) ==
          CertifiedOrdering::certainly_greater);
  }

  TEST_CASE("spacing and derivative hold to depth 25") {
    const auto orbit = iterate_orbit(params_for(4), kSymbolicDepth);
    REQUIRE(orbit.size() == kSymbolicDepth + 1);
    for (int k = 0; k < kSymbolicDepth; ++k) {
      CAPTURE(k);
      CHECK(orbit[k].spacing_ok());
      CHECK(orbit[k].derivative_ok());
    }
    CHECK(!orbit.back().spacing.has_value());
  }

  TEST_CASE("factorial growth bound") {
    oracle::Precision prec(40);
    for (int n : {1, 2, 5, 10, 25}) {
      const Big ref = Big(n) * log(Big(50)) + lgamma(Big(n + 1));
      CAPTURE(n);
      CHECK(encloses(factorial_growth_bound(n), ref));
    }
    const auto orbit = iterate_orbit(params_for(4), 10);
    for (int n = 1; n <= 10; ++n)
      CHECK(tw_cmp(orbit[n].logderiv, tw_from_interval(factorial_growth_bound(n))) ==
            CertifiedOrdering::certainly_greater);
  }

  TEST_CASE("p_1 is the anchor nearest to x_1") {
    oracle::Precision prec(60);
    const AnchorTable anchors(4);
    const auto orbit = iterate_orbit(params_for(4), 3);
    const IndexSelection s = select_p(1, orbit, anchors);
    REQUIRE(s.p.has_value());
    const Big x1 = orbit_x1();
    long best = 0;
    Big best_gap(1e9);
    for (long p = 90; p <= 130; ++p) {
      const Big g = abs(x1 - oracle::anchor(p, 4));
      if (g < best_gap) {
        best_gap = g;
        best = p;
      }
    }
    CHECK(*s.p == best);
    CHECK(best == 111);
    CHECK(encloses(s.gap, best_gap));
    CHECK(s.gap_certified);
    CHECK(s.gap.hi() < (M_PI + 0.1) / 2);
    // Deeper indices exceed every representable integer.
    const IndexSelection s2 = select_p(2, orbit, anchors);
    CHECK(!s2.p.has_value());
    CHECK(s2.gap_asserted);
  }

  TEST_CASE("Koebe constants in exact rational arithmetic") {
    using Q = boost::rational<long long>;
    const KoebeFactors<Q> k = koebe_factors(Q(1, 2));
    CHECK(k.growth_max == Q(2));
    CHECK(k.growth_min == Q(2, 9));
    CHECK(k.deriv_max == Q(12));
    CHECK(k.deriv_min == Q(4, 27));
    CHECK(k.quarter == Q(1, 4));
    CHECK(koebe_inner_constant<Q>() == Q(1, 108));
    CHECK(koebe_outer_constant<Q>() == Q(20));
    // The library's radius constants are consistent with (rounded from)
    // the exact ones.
    CHECK(kInnerRadiusFactor <= 1.0 / 108.0);
    CHECK(kOuterRadiusFactor >= 20.0);
    const auto ki = koebe_factors(Interval(0.5));
    CHECK(ki.deriv_min.lo() <= 4.0 / 27.0);
    CHECK(ki.deriv_min.hi() >= 4.0 / 27.0);
    CHECK_THROWS_AS(koebe_factors(1.0), DomainError);
    CHECK_THROWS_AS(koebe_factors(Q(0)), DomainError);
  }

  TEST_CASE("pullback disks U_1 (concrete) and U_2 (symbolic)") {
    oracle::Precision prec(60);
    const ParameterSet p = params_for(4);
    const AnchorTable anchors(4);
    const auto orbit = iterate_orbit(p, 3);
    const PullbackCertificate u1 = build_U(1, orbit, p, anchors);
    CHECK(u1.regime == Regime::concrete);
    CHECK(u1.pass);
    const double fp = std::exp(static_cast<double>(
        log(oracle::prototype_derivative(oracle::BigC(Big(0.5), Big(0)), oracle::lambda_of(4)).re)));
    CHECK(u1.radius_inner == doctest::Approx(kInnerRadiusFactor / fp).epsilon(1e-9));
    CHECK(u1.radius_inner == doctest::Approx(1.820e-6).epsilon(1e-3));
    CHECK(u1.radius_outer == doctest::Approx(4.045e-3).epsilon(1e-3));
    CHECK(u1.center_offset_bound + u1.radius_inner <= u1.radius_outer);
    REQUIRE(u1.image.has_value());
    CHECK(u1.image->pass);
    CHECK(u1.image->max_distance < kLandingRadius);

    const PullbackCertificate u2 = build_U(2, orbit, p, anchors);
    CHECK(u2.regime == Regime::symbolic);
    CHECK(u2.pass);
    CHECK(u2.radius_inner == 0.0);
    // -ln r_inner(2) = ln (f^2)'(1/2) - ln 0.009.
    CHECK(tw_cmp(u2.neg_log_inner, u1.neg_log_inner) == CertifiedOrdering::certainly_greater);
    CHECK_THROWS(build_U(5, orbit, p, anchors));
  }

  TEST_CASE("Schwarz landing for a degree-4 disk") {
    ParameterSet p = params_for(4);
    p.d_overrides[111] = 4.0;
    const AnchorTable anchors(4);
    const auto orbit = iterate_orbit(p, 2);
    const PullbackCertificate u1 = build_U(1, orbit, p, anchors);
    const DiskEnclosure d = schwarz_landing(1, u1, p);
    CHECK(d.anchor == DiskEnclosure::Anchor::base_point);
    CHECK(d.radius >= p.delta() / 256.0);
    CHECK(d.radius == doctest::Approx(p.delta() / 256.0).epsilon(1e-6));
    CHECK(std::string(to_string(d.rigor)) == "certified-interval");
  }

  TEST_CASE("adjustment") {
    const ParameterSet p = params_for(4);
    const AdjustmentResult none = adjust_parameters(p, 0);
    CHECK(none.pass);
    CHECK(none.steps.empty());
    CHECK(none.params.d_overrides == p.d_overrides);
    CHECK(none.params.w_overrides == p.w_overrides);

    oracle::Precision prec(200);
    const AdjustmentResult r = adjust_parameters(p, 1);
    REQUIRE(r.pass);
    REQUIRE(r.steps.size() == 1);
    const LandingCheck& s = r.steps[0];
    CHECK(s.p == 111L);
    CHECK(s.enlarged);
    CHECK(s.nested == CertifiedOrdering::certainly_greater);
    // Independent lower bound on the required degree:
    // delta 4^{-d} <= r_inner(2) = 0.009 / (f'(1/2) f'(x_1)).
    const Big need =
        (log(Big(0.45) / Big(0.009)) +
         log(oracle::prototype_derivative(oracle::BigC(Big(0.5), Big(0)), oracle::lambda_of(4)).re) +
         log_fprime(orbit_x1())) /
        log(Big(4));
    const auto d = tw_to_interval(s.d_after);
    REQUIRE(d.has_value());
    CHECK(Big(d->lo()) >= need);
    CHECK(Big(d->hi()) <= need * Big(1.02));
    CHECK(d->mid() == doctest::Approx(1.7145e152).epsilon(1e-3));
    REQUIRE(s.log_margin.has_value());
    CHECK(s.log_margin->lo() > 0.0);
    CHECK(r.budget_used <= p.correction_budget);
    CHECK_THROWS_AS(adjust_parameters(params_for(1), 1), PreconditionError);
  }

  TEST_CASE("json") {
    const auto orbit = iterate_orbit(params_for(4), 2);
    const auto j = to_json(orbit[1]);
    CHECK(j["k"] == 1);
    CHECK(interval_to_json(Interval(1.0, 2.0)) == nlohmann::json::array({1.0, 2.0}));
  }
}
