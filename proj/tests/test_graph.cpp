#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <set>

#include "oracles.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/geometry.hpp"
#include "wanderlab/graph.hpp"

using namespace wanderlab;
using oracle::Big;

namespace {

ParameterSet params_for(long K) {
  ParameterSet p;
  p.lambda_over_pi = K;
  return p;
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("vertical side vertices for lambda = 4 pi") {
    const auto edges = tau_size_strip_edges(params_for(4), 8);
    REQUIRE(edges.size() >= 4);
    oracle::Precision prec(40);
    for (int k = 0; k < 4; ++k) {
      CAPTURE(k);
      const double lo = static_cast<double>(asin(Big(k) / 4));
      const double hi = static_cast<double>(asin(Big(k + 1) / 4));
      CHECK(edges[k].v0.real() == 0.0);
      CHECK(edges[k].v0.imag() == doctest::Approx(lo).epsilon(1e-14));
      CHECK(edges[k].v1.imag() == doctest::Approx(hi).epsilon(1e-14));
    }
    CHECK(edges[3].v1.imag() == doctest::Approx(M_PI / 2).epsilon(1e-15));
    // The horizontal side continues at acosh(k/4) + i pi/2.
    CHECK(edges[4].v0 == edges[3].v1);
    CHECK(edges[4].v1.real() == doctest::Approx(static_cast<double>(acosh(Big(5) / 4))).epsilon(1e-14));
  }

  TEST_CASE("strip boundary edges map to length pi under lambda sinh") {
    oracle::Precision prec(50);
    for (long K : {1L, 4L, 10L}) {
      const auto edges = tau_size_strip_edges(params_for(K), 2000);
      const Big lam = oracle::lambda_of(K);
      double worst = 0.0;
      for (const auto& e : edges) {
        const oracle::BigC s0 = oracle::sinh(oracle::BigC(e.v0));
        const oracle::BigC s1 = oracle::sinh(oracle::BigC(e.v1));
        const oracle::BigC d = s1 - s0;
        const double ref = static_cast<double>(lam * oracle::abs(d));
        worst = std::max(worst, std::fabs(ref - M_PI));
        worst = std::max(worst, std::fabs(e.image_length - M_PI));
      }
      CAPTURE(K);
      CHECK(worst < 1e-9);
    }
  }

  TEST_CASE("circle of a degree-4 disk: 8 vertices with alternating labels") {
    ParameterSet p = params_for(4);
    p.d_overrides[1] = 4.0;
    const Graph g(p, GraphOptions{2, 0.0});
    double edges = 0.0;
    for (const auto& r : g.runs()) {
      if (r->tag != ComponentTag::disk_boundary || r->n != 1 || r->sx < 0 || r->sy < 0) continue;
      edges += r->edge_count();
      CHECK(r->is_arc());
      for (double k = 0; k <= r->edge_count(); ++k) {
        const Complex v = r->anchor[0] + r->vertex_offset(Side::start, k);
        const Complex u = v - Complex(r->sx * g.anchors().a(1), r->sy * M_PI);
        CHECK(std::abs(std::abs(u) - 1.0) < 1e-12);
        // Vertex at angle j pi/4 carries label (-1)^j: rho = identity on
        // the circle, so the label is the sign of Re((z - z_n)^4).
        const double re = std::real(u * u * u * u);
        CHECK(std::fabs(std::fabs(re) - 1.0) < 1e-9);
        CHECK(r->vertex_label(Side::start, k) == (re > 0 ? 1 : -1));
      }
    }
    CHECK(edges == 8.0);
  }

  TEST_CASE("connector plan for d = 4: arcs of length pi/4, dyadic doubling") {
    ParameterSet p = params_for(4);
    p.d_overrides[1] = 4.0;
    const Graph g(p, GraphOptions{2, 0.0});
    REQUIRE(!g.connectors().empty());
    const ConnectorPlan& c = g.connectors().front();
    CHECK(c.n == 1);
    CHECK(c.ell == doctest::Approx(M_PI / 4));
    CHECK(c.length(0) == c.length(1));
    for (int i = 2; i < c.depth; ++i) CHECK(c.length(i) == doctest::Approx(2 * c.length(i - 1)));
    // The pieces tile the connector exactly.
    double sum = 0.0;
    for (double l : c.bottom) sum += l;
    CHECK(sum + c.middle_count * c.middle_length == doctest::Approx(c.offset(c.edge_count())));
    CHECK(c.middle_length <= c.ell + 1e-12);
    for (const auto& r : g.runs()) {
      if (r->tag == ComponentTag::connector) CHECK(r->internal_adjacent_ratio() <= 2.0 + 1e-12);
      if (r->tag == ComponentTag::disk_boundary)
        CHECK(r->internal_adjacent_ratio() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("closed-form spacing ratios on the strip boundary") {
    oracle::Precision prec(40);
    // Adjacent vertical edges: asin((k+1)/K) - asin(k/K) grows toward the
    // corner by at most sqrt2 / (2 - sqrt2); horizontal edges shrink by at
    // least the first-step ratio acosh 3 - acosh 2 over acosh 2.
    const double vmax = std::sqrt(2.0) / (2.0 - std::sqrt(2.0));
    const double hmin = static_cast<double>((acosh(Big(3)) - acosh(Big(2))) / acosh(Big(2)));
    const double jmax = static_cast<double>(oracle::pi() / 2 / acosh(Big(2)));
    for (long K : {1L, 2L, 4L, 10L, 100L}) {
      CAPTURE(K);
      const auto e = tau_size_strip_edges(params_for(K), 4 * K);
      auto len = [](const StripEdgeImage& x) { return std::abs(x.v1 - x.v0); };
      for (long k = 0; k + 1 < K; ++k) {
        const double r = len(e[k + 1]) / len(e[k]);
        CHECK(r >= 1.0);
        CHECK(r <= vmax + 1e-12);
      }
      for (long k = K; k + 1 < static_cast<long>(e.size()); ++k) {
        const double r = len(e[k + 1]) / len(e[k]);
        CHECK(r <= 1.0);
        CHECK(r >= hmin - 1e-12);
      }
      const double junction = std::max(len(e[K]) / len(e[K - 1]), len(e[K - 1]) / len(e[K]));
      CHECK(junction <= jmax + 1e-12);
    }
  }

  TEST_CASE("explicit small graph is bipartite with correct diameters") {
    const Graph g = build_graph(params_for(4), 1);
    CHECK(g.label_conflicts().empty());
    const ExplicitGraph e = materialize(g);
    CHECK(static_cast<double>(e.edges.size()) == g.edge_count());
    CHECK(e.edges.size() == 4340);
    for (const auto& x : e.edges) {
      const Complex a = e.vertices[x.v0].position, b = e.vertices[x.v1].position;
      CHECK(e.vertices[x.v0].label == -e.vertices[x.v1].label);
      // Arcs here are at most a quarter circle, so the diameter is the chord.
      CHECK(x.diameter == doctest::Approx(std::abs(b - a)).epsilon(1e-9));
    }
    // Vertices are shared, not duplicated: positions are distinct.
    std::set<std::pair<long long, long long>> seen;
    for (const auto& v : e.vertices)
      seen.insert({std::llround(v.position.real() * 1e9), std::llround(v.position.imag() * 1e9)});
    CHECK(seen.size() == e.vertices.size());
    CHECK_THROWS_AS(materialize(build_graph(params_for(4), 3), 1e5), RangeError);
  }

  TEST_CASE("edge counts grow with the number of disks") {
    double last = 0.0;
    for (long n = 1; n <= 6; ++n) {
      const Graph g = build_graph(params_for(4), n);
      CHECK(g.edge_count() > last);
      CHECK(g.label_conflicts().empty());
      last = g.edge_count();
    }
    CHECK(last > 1e10);
  }

  TEST_CASE("bounded geometry is deterministic and monotone in the truncation") {
    for (long K : {1L, 4L, 10L}) {
      CAPTURE(K);
      double last_m = 0.0, last_nonadj = 0.0;
      for (long n = 1; n <= 6; ++n) {
        const GeometryReport r = check_bounded_geometry(build_graph(params_for(K), n));
        CHECK(r.bipartite);
        CHECK(r.min_angle >= M_PI / 2 - 1e-9);
        CHECK(r.max_adjacent_diam_ratio < 10.0);
        CHECK(r.max_nonadjacent_diam_over_dist < 10.0);
        CHECK(r.max_adjacent_diam_ratio >= last_m - 1e-12);
        CHECK(r.max_nonadjacent_diam_over_dist >= last_nonadj - 1e-12);
        last_m = r.max_adjacent_diam_ratio;
        last_nonadj = r.max_nonadjacent_diam_over_dist;
      }
      const GeometryReport a = check_bounded_geometry(build_graph(params_for(K), 4));
      const GeometryReport b = check_bounded_geometry(build_graph(params_for(K), 4));
      CHECK(to_json(a).dump() == to_json(b).dump());
    }
  }

  TEST_CASE("segment distance") {
    CHECK(segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
    CHECK(segment_distance({0, 0}, {1, 0}, {2, 0}, {3, 0}) == doctest::Approx(1.0));
    CHECK(segment_distance({0, 0}, {2, 2}, {0, 2}, {2, 0}) == 0.0);
  }

  TEST_CASE("json export") {
    const Graph g = build_graph(params_for(4), 1);
    const auto j = graph_to_json(g);
    CHECK(j["edge_count"].get<double>() == 4340.0);
    CHECK(j["edges"].size() == 4340);
    CHECK(j["runs"].size() == g.runs().size());
    const auto big = graph_to_json(build_graph(params_for(4), 3), 1e3);
    CHECK(!big.contains("edges"));
  }
}
