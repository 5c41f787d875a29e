#pragma once

// Area of the dilatation support E inside unit disks, compared against an
// (epsilon, h)-thin bound area(E ∩ D(z,1)) <= epsilon * h(|z|).
//
// E is covered by pieces: for every straight edge e of the graph a
// rectangle around e of half-width r0 * diam(e) (the tube T(r0)), and for
// every disk an annulus containing both the tube of its circle and the
// support of the interpolation, 1 - gap_in < |z - z_n| < 1 + r0 * chord.
// The upper bound is the sum of piece areas; the lower bound subtracts every
// pairwise overlap (second Bonferroni inequality).

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/graph.hpp"

namespace wanderlab {

struct ThinSetSpec {
  const Graph* graph = nullptr;
  double r0 = 0.1;
  double epsilon = 1.0;
  std::function<double(double)> h = [](double r) { return std::exp(-r); };
};

enum class ThinVerdict { pass, fail, indeterminate };
const char* to_string(ThinVerdict v);

struct ThinAreaResult {
  Complex z;
  double area = 0.0;        // the upper bound (sum of piece areas)
  double area_lower = 0.0;  // after subtracting pairwise overlaps
  double bound = 0.0;       // epsilon * h(|z|)
  ThinVerdict verdict = ThinVerdict::indeterminate;
  bool pass() const { return verdict == ThinVerdict::pass; }
};

ThinAreaResult thin_area(const ThinSetSpec& spec, Complex z);

/// Area of D(c1, r1) ∩ D(c2, r2).
double disk_intersection_area(Complex c1, double r1, Complex c2, double r2);
/// Area of {1 - gap_in < |w - c| < 1 + gap_out} ∩ D(z, R), stable for thin
/// annuli.
double annulus_disk_area(Complex c, double gap_in, double gap_out, Complex z, double R = 1.0);
/// Area of the axis-aligned rectangle b intersected with D(z, R).
double box_disk_area(const Box& b, Complex z, double R = 1.0);

/// Inner gap of the annulus piece for degree d: the larger of the
/// interpolation support 1 - (3/4)^{1/d} and the tube half-width r0 * chord.
double annulus_inner_gap(double d, double r0);

/// Twenty sample centers on T with |z| <= 30: the junctions a_n + i pi/2 and
/// connector midpoints for n = 1..9, and the bottoms of D_1 and D_2. Every
/// center sees pieces depending on lambda and on the degrees.
std::vector<Complex> thin_sample_centers(const AnchorTable& anchors);

nlohmann::json to_json(const ThinAreaResult& r);

}  // namespace wanderlab
