#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/interval.hpp"

using wanderlab::Interval;
using oracle::Big;

namespace {

bool encloses(const Interval& x, const Big& v) { return Big(x.lo()) <= v && v <= Big(x.hi()); }

double ulp(double x) {
  return std::nextafter(x, INFINITY) - x + std::numeric_limits<double>::denorm_min();
}

struct UnaryCase {
  std::string name;
  std::function<Interval(const Interval&)> lib;
  std::function<Big(const Big&)> ref;
  double lo, hi;
};

}  // namespace

TEST_SUITE("interval") {
  TEST_CASE("basic operations enclose the exact result") {
    oracle::Precision prec(60);
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
      const double a = u(rng), b = u(rng);
      const Big A(a), B(b);
      CHECK(encloses(Interval(a) + Interval(b), A + B));
      CHECK(encloses(Interval(a) - Interval(b), A - B));
      CHECK(encloses(Interval(a) * Interval(b), A * B));
      if (b != 0.0) CHECK(encloses(Interval(a) / Interval(b), A / B));
      CHECK(encloses(wanderlab::sqrt(Interval(std::fabs(a))), sqrt(Big(std::fabs(a)))));
    }
  }

  TEST_CASE("transcendentals enclose a 60-digit reference") {
    oracle::Precision prec(60);
    const std::vector<UnaryCase> cases = {
        {"exp", [](const Interval& x) { return wanderlab::exp(x); },
         [](const Big& x) { return exp(x); }, -700, 700},
        {"log", [](const Interval& x) { return wanderlab::log(x); },
         [](const Big& x) { return log(x); }, 1e-300, 1e300},
        {"sinh", [](const Interval& x) { return wanderlab::sinh(x); },
         [](const Big& x) { return sinh(x); }, -700, 700},
        {"cosh", [](const Interval& x) { return wanderlab::cosh(x); },
         [](const Big& x) { return cosh(x); }, -700, 700},
        {"acosh", [](const Interval& x) { return wanderlab::acosh(x); },
         [](const Big& x) { return acosh(x); }, 1, 1e300},
        {"asinh", [](const Interval& x) { return wanderlab::asinh(x); },
         [](const Big& x) { return asinh(x); }, -1e300, 1e300},
        {"sin", [](const Interval& x) { return wanderlab::sin(x); },
         [](const Big& x) { return sin(x); }, -1e4, 1e4},
        {"cos", [](const Interval& x) { return wanderlab::cos(x); },
         [](const Big& x) { return cos(x); }, -1e4, 1e4},
        {"asin", [](const Interval& x) { return wanderlab::asin(x); },
         [](const Big& x) { return asin(x); }, -1, 1},
        {"expm1", [](const Interval& x) { return wanderlab::expm1(x); },
         [](const Big& x) { return expm1(x); }, -50, 50},
        {"log1p", [](const Interval& x) { return wanderlab::log1p(x); },
         [](const Big& x) { return log1p(x); }, -0.99, 1e10},
    };
    std::mt19937_64 rng(7);
    for (const auto& c : cases) {
      CAPTURE(c.name);
      const bool log_scale = c.lo > 0 && c.hi / c.lo > 1e6;
      std::uniform_real_distribution<double> u(log_scale ? std::log(c.lo) : c.lo,
                                               log_scale ? std::log(c.hi) : c.hi);
      for (int i = 0; i < 400; ++i) {
        const double x = log_scale ? std::exp(u(rng)) : u(rng);
        CAPTURE(x);
        const Interval r = c.lib(Interval(x));
        CHECK(encloses(r, c.ref(Big(x))));
        // Tight: at most a few ulps wide.
        CHECK(r.width() <= 4.0 * ulp(r.mag()));
      }
    }
  }

  TEST_CASE("pi and ln 2 enclosures") {
    oracle::Precision prec(60);
    CHECK(encloses(wanderlab::pi_interval(), oracle::pi()));
    CHECK(encloses(wanderlab::ln2_interval(), log(Big(2))));
    CHECK(wanderlab::pi_interval().width() <= 1e-15);
  }

  TEST_CASE("interval with reversed endpoints is rejected") {
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("complex interval image of cosh(lambda sinh z) encloses the reference") {
    oracle::Precision prec(50);
    const std::vector<std::complex<double>> pts = {{0.5, 0.0}, {0.3, 0.4}, {1.2, -1.1}, {2.0, 1.5}};
    for (auto z : pts) {
      const wanderlab::CInterval Z(z);
      const wanderlab::CInterval lam_i(wanderlab::pi_interval() * Interval(4.0), Interval(0.0));
      const wanderlab::CInterval img = wanderlab::cosh(lam_i * wanderlab::sinh(Z));
      const oracle::BigC ref = oracle::prototype(oracle::BigC(z), oracle::lambda_of(4));
      CHECK(encloses(img.re, ref.re));
      CHECK(encloses(img.im, ref.im));
    }
  }
}
