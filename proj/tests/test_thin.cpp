#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "wanderlab/graph.hpp"
#include "wanderlab/thin.hpp"

using namespace wanderlab;
using oracle::Big;

namespace {

ParameterSet params_for(long K) {
  ParameterSet p;
  p.lambda_over_pi = K;
  return p;
}

/// Lens area of two disks by the classical closed form.
double lens_area(double d, double r1, double r2) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::fabs(r1 - r2)) return M_PI * std::pow(std::min(r1, r2), 2);
  const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  return r1 * r1 * (a1 - std::sin(2 * a1) / 2) + r2 * r2 * (a2 - std::sin(2 * a2) / 2);
}

/// Midpoint-rule area of a set given by its indicator, on a fine grid.
template <class F>
double grid_area(F inside, double x0, double x1, double y0, double y1, int n) {
  const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
  long count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inside(x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy)) ++count;
  return count * hx * hy;
}

}  // namespace

TEST_SUITE("thin") {
  TEST_CASE("disk intersection against the lens formula") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0), r(0.1, 1.5);
    for (int i = 0; i < 200; ++i) {
      const double d = u(rng), r1 = r(rng), r2 = r(rng);
      CAPTURE(d);
      const double a = disk_intersection_area(Complex(0, 0), r1, Complex(d, 0), r2);
      CHECK(a == doctest::Approx(lens_area(d, r1, r2)).epsilon(1e-9));
      // Rotation invariance.
      const Complex c2 = std::polar(d, 0.7);
      CHECK(disk_intersection_area(Complex(0, 0), r1, c2, r2) == doctest::Approx(a).epsilon(1e-9));
    }
  }

  TEST_CASE("annulus inner gap follows the interpolation support") {
    oracle::Precision prec(30);
    for (double d : {2.0, 4.0, 8.0, 64.0}) {
      const double support = static_cast<double>(1 - pow(Big(0.75), 1 / Big(d)));
      CHECK(annulus_inner_gap(d, 0.0) == doctest::Approx(support).epsilon(1e-12));
      CHECK(annulus_inner_gap(d, 0.0) <= annulus_inner_gap(d, 0.1));
    }
    // Full annulus inside a large disk: pi (1 - (1 - gap)^2), i.e.
    // pi (1 - (3/4)^{2/d}).
    const double g2 = annulus_inner_gap(2.0, 0.0);
    CHECK(annulus_disk_area(Complex(0, 0), g2, 0.0, Complex(0, 0), 3.0) ==
          doctest::Approx(M_PI * 0.25).epsilon(1e-9));
    const double g8 = annulus_inner_gap(8.0, 0.0);
    CHECK(annulus_disk_area(Complex(0, 0), g8, 0.0, Complex(0, 0), 3.0) ==
          doctest::Approx(M_PI * (1 - std::pow(0.75, 0.25))).epsilon(1e-9));
  }

  TEST_CASE("annulus and box pieces against grid integration") {
    const Complex z(0.9, 0.3);
    const double ann = annulus_disk_area(Complex(0, 0), 0.2, 0.05, z, 1.0);
    const double ann_ref = grid_area(
        [&](double x, double y) {
          const double r = std::hypot(x, y);
          return r > 0.8 && r < 1.05 && std::hypot(x - z.real(), y - z.imag()) < 1.0;
        },
        -1.1, 1.1, -1.1, 1.1, 2000);
    CHECK(ann == doctest::Approx(ann_ref).epsilon(5e-3));

    const Box b{0.2, 1.4, -0.1, 0.35};
    const double box = box_disk_area(b, z, 1.0);
    const double box_ref = grid_area(
        [&](double x, double y) { return std::hypot(x - z.real(), y - z.imag()) < 1.0; }, b.x0, b.x1,
        b.y0, b.y1, 2000);
    CHECK(box == doctest::Approx(box_ref).epsilon(5e-3));
    CHECK(box_disk_area(Box{5, 6, 5, 6}, z, 1.0) == 0.0);
  }

  TEST_CASE("far from the graph the area is zero") {
    const Graph g = build_graph(params_for(4), 3);
    ThinSetSpec spec;
    spec.graph = &g;
    const ThinAreaResult r = thin_area(spec, Complex(1.5, 0.0));
    CHECK(r.area == 0.0);
    CHECK(r.area_lower == 0.0);
    CHECK(r.pass());
    CHECK(std::string(to_string(r.verdict)) == "pass");
  }

  TEST_CASE("upper and lower bounds bracket each other") {
    for (long K : {1L, 4L, 10L}) {
      const Graph g = build_graph(params_for(K), 10);
      ThinSetSpec spec;
      spec.graph = &g;
      for (const Complex z : thin_sample_centers(g.anchors())) {
        const ThinAreaResult r = thin_area(spec, z);
        CAPTURE(z);
        CHECK(r.area_lower <= r.area + 1e-15);
        CHECK(r.area_lower >= 0.0);
        CHECK(r.area <= M_PI * 4);
        CHECK(r.bound == doctest::Approx(std::exp(-std::abs(z))));
        if (r.area_lower > r.bound) CHECK(r.verdict == ThinVerdict::fail);
        if (r.area <= r.bound) CHECK(r.verdict == ThinVerdict::pass);
      }
    }
  }

  TEST_CASE("sample centers") {
    const AnchorTable anchors(4);
    const auto c = thin_sample_centers(anchors);
    CHECK(c.size() == 20);
    for (const Complex z : c) CHECK(std::abs(z) <= 30.0);
  }

  TEST_CASE("json form") {
    const Graph g = build_graph(params_for(4), 2);
    ThinSetSpec spec;
    spec.graph = &g;
    const auto j = to_json(thin_area(spec, Complex(g.anchors().a(1), M_PI / 2)));
    CHECK(j.contains("area"));
    CHECK(j.contains("verdict"));
  }
}
