#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/tower.hpp"

using namespace wanderlab;
using oracle::Big;

namespace {

bool encloses(const Interval& x, const Big& v) { return Big(x.lo()) <= v && v <= Big(x.hi()); }

bool tower_encloses(const TowerReal& t, const Big& v) {
  const auto iv = tw_to_interval(t);
  REQUIRE(iv.has_value());
  return encloses(*iv, v);
}

}  // namespace

TEST_SUITE("tower") {
  TEST_CASE("normalization of small values") {
    const TowerReal half = tw_from_real(0.5);
    CHECK(half.sign == 1);
    CHECK(half.level == 0);
    CHECK(half.index.lo() == 0.5);
    CHECK(half.index.hi() == 0.5);

    const TowerReal one = tw_from_real(1.0);
    CHECK(one.sign == 1);
    CHECK(one.level == 1);
    CHECK(one.index.lo() == 0.0);
    CHECK(one.index.hi() == 0.0);

    CHECK(tw_from_real(0.0).sign == 0);
    CHECK(tw_from_interval(Interval(-3.0)).sign == -1);
    CHECK_THROWS_AS(tw_from_real(-3.0), DomainError);
  }

  TEST_CASE("349 sits at level 3 with index ln ln ln 349") {
    oracle::Precision prec(40);
    const TowerReal t = tw_from_real(349.0);
    CHECK(t.level == 3);
    const Big idx = log(log(log(Big(349))));
    CHECK(encloses(t.index, idx));
    CHECK(t.index.width() < 1e-14);
    CHECK(t.index.mid() == doctest::Approx(0.569457643807094).epsilon(1e-12));
  }

  TEST_CASE("exp and ln shift the level without touching the index") {
    TowerReal t;
    t.sign = 1;
    t.level = 2;
    t.index = Interval(0.3, 0.31);
    const TowerReal e = tw_exp(t);
    CHECK(e.level == 3);
    CHECK(e.index == t.index);
    const TowerReal l = tw_ln(e);
    CHECK(l.level == 2);
    CHECK(l.index == t.index);
  }

  TEST_CASE("exp of a small value encloses the reference") {
    oracle::Precision prec(40);
    CHECK(tower_encloses(tw_exp(tw_from_real(0.5)), exp(Big(0.5))));
    CHECK(tower_encloses(tw_ln(tw_from_real(349.0)), log(Big(349))));
  }

  TEST_CASE("ordering") {
    TowerReal a;
    a.sign = 1;
    a.level = 5;
    a.index = Interval(0.1);
    TowerReal b;
    b.sign = 1;
    b.level = 2;
    b.index = Interval(0.9);
    CHECK(tw_cmp(a, b) == CertifiedOrdering::certainly_greater);
    CHECK(tw_cmp(b, a) == CertifiedOrdering::certainly_less);
    CHECK(tw_cmp(tw_from_real(349.0), tw_from_real(11.0)) == CertifiedOrdering::certainly_greater);
    // Identical point representations are equal; identical wide enclosures
    // may hide different values, so they stay indeterminate.
    CHECK(tw_cmp(tw_from_real(0.5), tw_from_real(0.5)) == CertifiedOrdering::certainly_equal);
    CHECK(tw_cmp(b, b) == CertifiedOrdering::certainly_equal);
    CHECK(tw_cmp(tw_from_real(349.0), tw_from_real(349.0)) == CertifiedOrdering::indeterminate);
    CHECK(tw_cmp(tw_from_interval(Interval(-2.0)), tw_from_real(1.0)) ==
          CertifiedOrdering::certainly_less);
  }

  TEST_CASE("multiplication") {
    oracle::Precision prec(40);
    const TowerReal x = tw_from_real(123.456);
    CHECK(tower_encloses(tw_mul(x, tw_from_real(1.0)), Big(123.456)));
    CHECK(tower_encloses(tw_mul(tw_from_real(50.0), tw_from_real(50.0)), Big(2500)));
  }

  TEST_CASE("addition absorbs a tiny term within the declared bound") {
    TowerReal big;
    big.sign = 1;
    big.level = 4;
    big.index = Interval(0.5);
    const TowerReal small = tw_from_real(2.0);
    const TowerReal sum = tw_add(big, small);
    CHECK(sum.level == 4);
    CHECK(sum.index.lo() <= 0.5);
    CHECK(sum.index.hi() >= 0.5);
    // The widening of the index stays far below one part in 1e12.
    CHECK(sum.index.width() < 1e-12);
    CHECK(tw_cmp(sum, big) != CertifiedOrdering::certainly_less);
  }

  TEST_CASE("random arithmetic against the multiprecision reference") {
    oracle::Precision prec(50);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> le(-5.0, 12.0);
    for (int i = 0; i < 500; ++i) {
      const double a = std::exp(le(rng)), b = std::exp(le(rng));
      CAPTURE(a);
      CAPTURE(b);
      const TowerReal A = tw_from_real(a), B = tw_from_real(b);
      CHECK(tower_encloses(A, Big(a)));
      CHECK(tower_encloses(tw_add(A, B), Big(a) + Big(b)));
      CHECK(tower_encloses(tw_mul(A, B), Big(a) * Big(b)));
      if (a > 1.0) CHECK(tower_encloses(tw_ln(A), log(Big(a))));
      if (a < 600) CHECK(tower_encloses(tw_exp(A), exp(Big(a))));
      if (a > 0.25) CHECK(tower_encloses(tw_add_real(A, Interval(-0.25)), Big(a) - Big(0.25)));
    }
  }

  TEST_CASE("prototype step: f(0) = 1 and f(1/2) ~ 349") {
    oracle::Precision prec(50);
    const Interval lam = pi_interval() * Interval(4.0);
    CHECK(tower_encloses(tw_prototype_step(tw_from_real(0.0), lam), Big(1)));
    const Big ref = cosh(oracle::lambda_of(4) * sinh(Big(0.5)));
    CHECK(tower_encloses(tw_prototype_step(tw_from_real(0.5), lam), ref));
    CHECK(static_cast<double>(ref) == doctest::Approx(349.0).epsilon(1e-3));
  }

  TEST_CASE("prototype step at 349: ln of the result encloses 4 pi sinh(349) - ln 2") {
    oracle::Precision prec(60);
    const Interval lam = pi_interval() * Interval(4.0);
    const TowerReal y = tw_prototype_step(tw_from_real(349.0), lam);
    // x = 349 -> lambda sinh(349) ~ 1.2e152, so y = exp(exp(349.5...)) sits
    // at level 5 (exp^5 of an index in [0, 1)).
    CHECK(y.level == 5);
    const Big s = oracle::lambda_of(4) * sinh(Big(349));
    const Big ln_y = s - log(Big(2));  // ln cosh s - (s - ln 2) < e^{-2s}
    CHECK(tower_encloses(tw_ln(y), ln_y));
    CHECK(tower_encloses(tw_log_lambda_sinh(tw_from_real(349.0), lam), log(s)));
  }

  TEST_CASE("prototype log-derivative") {
    oracle::Precision prec(50);
    const Interval lam = pi_interval() * Interval(4.0);
    const Big L = oracle::lambda_of(4);
    const Big ref = log(L * cosh(Big(0.5)) * sinh(L * sinh(Big(0.5))));
    CHECK(tower_encloses(tw_prototype_logderiv(tw_from_real(0.5), lam), ref));
    CHECK(exp(static_cast<double>(ref)) == doctest::Approx(4945).epsilon(1e-3));
  }

  TEST_CASE("level cap") {
    TowerReal t;
    t.sign = 1;
    t.level = TowerReal::kMaxLevel;
    t.index = Interval(0.5);
    CHECK_THROWS_AS(tw_exp(t), LevelOverflow);
  }

  TEST_CASE("string form") {
    CHECK(tw_to_string(tw_from_real(0.5)).find("E^0") != std::string::npos);
  }
}
