#include "wanderlab/thin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wanderlab/errors.hpp"

namespace wanderlab {
namespace {

constexpr double kHalfPi = M_PI / 2.0;
constexpr double kMargin = 1e-12;  // geometric slack for inside/outside tests
constexpr double kConnectorLength = M_PI / 2.0 - 1.0;

// Signed area of triangle (0, a, b) intersected with the disk of radius R
// centered at 0: the building block of polygon/disk intersection.
double tri_disk_area(Complex a, Complex b, double R) {
  auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  auto dot = [](Complex u, Complex v) { return u.real() * v.real() + u.imag() * v.imag(); };
  auto sector = [&](Complex u, Complex v) {
    return 0.5 * R * R * std::atan2(cross(u, v), dot(u, v));
  };
  const double ra = std::abs(a), rb = std::abs(b);
  if (ra <= R && rb <= R) return 0.5 * cross(a, b);
  const Complex d = b - a;
  // Solve |a + t d| = R.
  const double A = std::norm(d), B = dot(a, d), C = std::norm(a) - R * R;
  const double disc = B * B - A * C;
  if (A == 0.0) return 0.0;
  if (disc <= 0.0) return sector(a, b);
  const double sq = std::sqrt(disc);
  const double t0 = std::clamp((-B - sq) / A, 0.0, 1.0);
  const double t1 = std::clamp((-B + sq) / A, 0.0, 1.0);
  const Complex p0 = a + t0 * d, p1 = a + t1 * d;
  if (ra <= R) return 0.5 * cross(a, p1) + sector(p1, b);
  if (rb <= R) return sector(a, p0) + 0.5 * cross(p0, b);
  if (t0 >= t1) return sector(a, b);
  return sector(a, p0) + 0.5 * cross(p0, p1) + sector(p1, b);
}

bool box_inside_disk(const Box& b, Complex z, double R) {
  for (Complex p : {Complex(b.x0, b.y0), Complex(b.x1, b.y0), Complex(b.x0, b.y1),
                    Complex(b.x1, b.y1)}) {
    if (std::abs(p - z) > R * (1.0 - kMargin)) return false;
  }
  return true;
}

bool box_outside_disk(const Box& b, Complex z, double R) {
  const double dx = std::max({0.0, b.x0 - z.real(), z.real() - b.x1});
  const double dy = std::max({0.0, b.y0 - z.imag(), z.imag() - b.y1});
  return std::hypot(dx, dy) >= R * (1.0 + kMargin);
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

Box intersect(const Box& a, const Box& b) {
  return {std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0),
          std::min(a.y1, b.y1)};
}

double box_area(const Box& b) {
  return std::max(0.0, b.x1 - b.x0) * std::max(0.0, b.y1 - b.y0);
}

struct Annulus {
  Complex c;
  double gap_in, gap_out;
};

struct BlockRef {
  const Run* run;
  Side side;
  double k0, k1;
};

class AreaComputer {
 public:
  AreaComputer(const ThinSetSpec& spec, Complex z) : spec_(spec), z_(z) {
    const Graph& g = *spec.graph;
    for (const auto& r : g.runs()) {
      if (r->is_arc()) continue;
      rect_runs_.push_back(r.get());
    }
    for (long n = 1; n <= g.n_disks(); ++n) {
      const double d = g.params().d(n);
      const double a = g.anchors().a(n);
      const double gap_out = spec.r0 * 2.0 * std::sin(kHalfPi / d);
      const double gap_in = annulus_inner_gap(d, spec.r0);
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          annuli_.push_back({Complex(sx * a, sy * M_PI), gap_in, gap_out});
        }
      }
    }
  }

  void compute(double& upper, double& lower) {
    upper = lower = 0.0;
    for (const Annulus& an : annuli_) {
      if (std::abs(an.c - z_) >= 2.0 + an.gap_out) continue;
      const double a = annulus_disk_area(an.c, an.gap_in, an.gap_out, z_);
      upper += a;
      lower += a;
    }
    for (const Run* r : rect_runs_) {
      for (const BlockRef& b : top_blocks(r)) sum_block(b, upper, lower);
    }
    // Pairwise overlaps between rectangles of different runs and between
    // rectangles and annuli.
    std::vector<BlockRef> blocks;
    for (const Run* r : rect_runs_) {
      for (const BlockRef& b : top_blocks(r)) {
        if (!box_outside_disk(tube_box(b), z_, 1.0)) blocks.push_back(b);
      }
    }
    for (size_t i = 0; i < blocks.size(); ++i) {
      for (size_t j = i + 1; j < blocks.size(); ++j) {
        if (blocks[i].run == blocks[j].run) continue;
        lower -= overlap_rect_rect(blocks[i], blocks[j]);
      }
      for (const Annulus& an : annuli_) lower -= overlap_rect_annulus(blocks[i], an);
    }
    lower = std::max(lower, 0.0);
  }

 private:
  std::vector<BlockRef> top_blocks(const Run* r) const {
    const double c = r->edge_count();
    if (c < 2.0) return {{r, Side::start, 0.0, c}};
    const double s = std::clamp(r->split_index(), 1.0, c - 1.0);
    return {{r, Side::start, 0.0, s}, {r, Side::end, 0.0, c - s}};
  }

  // Box covering the rectangles of the block, in global coordinates.
  Box tube_box(const BlockRef& b) const {
    const Box core = b.run->block_box(b.side, b.k0, b.k1).translated(
        b.run->anchor[static_cast<int>(b.side)]);
    const double w = spec_.r0 * b.run->block_max_diam(b.side, b.k0, b.k1);
    Box out = core;
    if (b.run->is_horizontal()) {
      out.y0 -= w;
      out.y1 += w;
    } else {
      out.x0 -= w;
      out.x1 += w;
    }
    return out;
  }

  Box edge_rect(const Run* r, Side s, double k) const {
    return tube_box({r, s, k, k + 1.0});
  }

  bool refinable(const BlockRef& b, double& mid) const {
    mid = std::floor((b.k0 + b.k1) / 2.0);
    return mid > b.k0 && mid < b.k1;
  }

  void sum_block(const BlockRef& b, double& upper, double& lower) const {
    const Box box = tube_box(b);
    if (box_outside_disk(box, z_, 1.0)) return;
    const double count = b.k1 - b.k0;
    if (box_inside_disk(box, z_, 1.0)) {
      double lo = 0.0, hi = 0.0;
      b.run->block_sum_sq(b.side, b.k0, b.k1, lo, hi);
      upper += 2.0 * spec_.r0 * hi;
      lower += 2.0 * spec_.r0 * lo;
      return;
    }
    if (count == 1.0) {
      const double a = box_disk_area(box, z_);
      upper += a;
      lower += a;
      return;
    }
    double mid = 0.0;
    if (!refinable(b, mid)) {
      // Below double resolution: the whole block counts in the upper bound.
      double lo = 0.0, hi = 0.0;
      b.run->block_sum_sq(b.side, b.k0, b.k1, lo, hi);
      upper += 2.0 * spec_.r0 * hi;
      return;
    }
    sum_block({b.run, b.side, b.k0, mid}, upper, lower);
    sum_block({b.run, b.side, mid, b.k1}, upper, lower);
  }

  // Upper bound of the area of (rects of a) ∩ (rects of b) ∩ D(z, 1).
  double overlap_rect_rect(const BlockRef& a, const BlockRef& b) const {
    const Box ba = tube_box(a), bb = tube_box(b);
    if (!boxes_overlap(ba, bb)) return 0.0;
    const Box both = intersect(ba, bb);
    if (box_outside_disk(both, z_, 1.0)) return 0.0;
    const double ca = a.k1 - a.k0, cb = b.k1 - b.k0;
    if (ca == 1.0 && cb == 1.0) return box_disk_area(both, z_);
    auto extent = [](const Box& x) { return std::hypot(x.x1 - x.x0, x.y1 - x.y0); };
    const bool split_a = cb == 1.0 || (ca > 1.0 && extent(ba) >= extent(bb));
    const BlockRef& big = split_a ? a : b;
    double mid = 0.0;
    if (!refinable(big, mid)) return box_disk_area(both, z_);
    const BlockRef lo{big.run, big.side, big.k0, mid}, hi{big.run, big.side, mid, big.k1};
    if (&big == &a) return overlap_rect_rect(lo, b) + overlap_rect_rect(hi, b);
    return overlap_rect_rect(a, lo) + overlap_rect_rect(a, hi);
  }

  // Upper bound of the area of (rects of a) ∩ annulus ∩ D(z, 1).
  double overlap_rect_annulus(const BlockRef& a, const Annulus& an) const {
    const Box box = tube_box(a);
    const double r_out = 1.0 + an.gap_out;
    if (box_outside_disk(box, an.c, r_out) || box_outside_disk(box, z_, 1.0)) return 0.0;
    if (box_inside_disk(box, an.c, 1.0 - an.gap_in)) return 0.0;
    double mid = 0.0;
    if (a.k1 - a.k0 == 1.0 || !refinable(a, mid)) {
      return std::min(box_disk_area(box, z_), box_disk_area(box, an.c, r_out));
    }
    return overlap_rect_annulus({a.run, a.side, a.k0, mid}, an) +
           overlap_rect_annulus({a.run, a.side, mid, a.k1}, an);
  }

  const ThinSetSpec& spec_;
  Complex z_;
  std::vector<const Run*> rect_runs_;
  std::vector<Annulus> annuli_;
};

}  // namespace

const char* to_string(ThinVerdict v) {
  switch (v) {
    case ThinVerdict::pass:
      return "pass";
    case ThinVerdict::fail:
      return "fail";
    case ThinVerdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

double disk_intersection_area(Complex c1, double r1, Complex c2, double r2) {
  const double d = std::abs(c1 - c2);
  if (d >= r1 + r2) return 0.0;
  if (d <= std::fabs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return M_PI * r * r;
  }
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

double annulus_disk_area(Complex c, double gap_in, double gap_out, Complex z, double R) {
  const double width = gap_in + gap_out;
  if (width > 1e-4) {
    return std::max(0.0, disk_intersection_area(c, 1.0 + gap_out, z, R) -
                             disk_intersection_area(c, 1.0 - gap_in, z, R));
  }
  // Thin annulus: integrate the arc length of circles |w - c| = rho inside
  // D(z, R) over rho; the integrand is smooth across a width far below its
  // scale of variation, so a three-point Simpson rule is exact to O(width^5).
  const double d = std::abs(c - z);
  auto arc = [&](double rho) {
    if (d == 0.0) return rho <= R ? 2.0 * M_PI * rho : 0.0;
    if (d + rho <= R) return 2.0 * M_PI * rho;
    if (rho >= d + R || d >= rho + R) return 0.0;
    const double cosang = (d * d + rho * rho - R * R) / (2.0 * d * rho);
    return 2.0 * rho * std::acos(std::clamp(cosang, -1.0, 1.0));
  };
  const double r0 = 1.0 - gap_in, r1 = 1.0 + gap_out;
  return width * (arc(r0) + 4.0 * arc(0.5 * (r0 + r1)) + arc(r1)) / 6.0;
}

double box_disk_area(const Box& b, Complex z, double R) {
  if (b.x1 <= b.x0 || b.y1 <= b.y0) return 0.0;
  const double dx = std::max({b.x0 - z.real(), z.real() - b.x1, 0.0});
  const double dy = std::max({b.y0 - z.imag(), z.imag() - b.y1, 0.0});
  if (dx * dx + dy * dy >= R * R) return 0.0;
  const Complex p[4] = {Complex(b.x0, b.y0) - z, Complex(b.x1, b.y0) - z,
                        Complex(b.x1, b.y1) - z, Complex(b.x0, b.y1) - z};
  double a = 0.0;
  for (int i = 0; i < 4; ++i) a += tri_disk_area(p[i], p[(i + 1) % 4], R);
  return std::clamp(a, 0.0, box_area(b));
}

double annulus_inner_gap(double d, double r0) {
  const double support = -std::expm1(std::log(0.75) / d);
  return std::max(support, r0 * 2.0 * std::sin(kHalfPi / d));
}

ThinAreaResult thin_area(const ThinSetSpec& spec, Complex z) {
  if (spec.graph == nullptr) throw PreconditionError("thin_area: spec has no graph");
  ThinAreaResult out;
  out.z = z;
  AreaComputer(spec, z).compute(out.area, out.area_lower);
  out.bound = spec.epsilon * spec.h(std::abs(z));
  if (out.area <= out.bound) {
    out.verdict = ThinVerdict::pass;
  } else if (out.area_lower > out.bound) {
    out.verdict = ThinVerdict::fail;
  } else {
    out.verdict = ThinVerdict::indeterminate;
  }
  return out;
}

std::vector<Complex> thin_sample_centers(const AnchorTable& anchors) {
  std::vector<Complex> z;
  for (long n = 1; n <= 9; ++n) {
    const double a = anchors.a(n);
    z.emplace_back(a, kHalfPi);
    z.emplace_back(a, kHalfPi + kConnectorLength / 2.0);
  }
  // Bottoms of the first two circles: within reach of both the junction
  // (lambda-dependent) and the annulus (d-dependent).
  z.emplace_back(anchors.a(1), M_PI - 1.0);
  z.emplace_back(anchors.a(2), M_PI - 1.0);
  return z;
}

nlohmann::json to_json(const ThinAreaResult& r) {
  return {{"z", {r.z.real(), r.z.imag()}},
          {"area", r.area},
          {"area_lower", r.area_lower},
          {"bound", r.bound},
          {"verdict", to_string(r.verdict)}};
}

}  // namespace wanderlab
