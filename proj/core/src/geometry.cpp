#include "wanderlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wanderlab {
namespace {

constexpr double kPruneSlack = 1e-12;
constexpr int kArcSamples = 64;
constexpr double kUlp = std::numeric_limits<double>::epsilon();

struct Block {
  const Run* run;
  Side side;
  double k0, k1;
  double count() const { return k1 - k0; }
  const VertexKey& key() const { return run->key[static_cast<int>(side)]; }
  Complex anchor() const { return run->anchor[static_cast<int>(side)]; }
};

bool same_anchor(const Block& a, const Block& b) { return a.key() == b.key(); }

// Run end vertices touched by the single edge of a leaf block.
std::vector<VertexKey> touched_ends(const Block& b) {
  std::vector<VertexKey> out;
  const int s = static_cast<int>(b.side);
  if (b.k0 == 0.0) out.push_back(b.run->key[s]);
  if (b.k0 + 1.0 == b.run->edge_count()) out.push_back(b.run->key[1 - s]);
  return out;
}

bool adjacent(const Block& a, const Block& b) {
  for (const auto& ka : touched_ends(a)) {
    for (const auto& kb : touched_ends(b)) {
      if (ka == kb) return true;
    }
  }
  return false;
}

double extent(const Block& b) {
  const Box x = b.run->block_box(b.side, b.k0, b.k1);
  return std::hypot(x.x1 - x.x0, x.y1 - x.y0);
}

// Sample points of a single edge, relative to the block anchor, with the
// sagitta of the sampled polyline as the allowance.
std::vector<Complex> edge_samples(const Block& b, double& sagitta) {
  std::vector<Complex> pts;
  if (!b.run->is_arc()) {
    sagitta = 0.0;
    pts = {b.run->vertex_offset(b.side, b.k0), b.run->vertex_offset(b.side, b.k0 + 1.0)};
    return pts;
  }
  const double diam = b.run->edge_diam(b.side, b.k0);
  // Unit circle arc of half-angle h: sub-arcs of half-angle h / samples.
  const double h = std::asin(std::min(1.0, diam / 2.0));
  const double sub = h / kArcSamples;
  sagitta = 2.0 * std::sin(sub / 2.0) * std::sin(sub / 2.0);
  for (int i = 0; i <= kArcSamples; ++i) {
    pts.push_back(b.run->edge_point(b.side, b.k0, static_cast<double>(i) / kArcSamples));
  }
  return pts;
}

class Checker {
 public:
  explicit Checker(const Graph& g) : g_(g) {}

  GeometryReport run() {
    GeometryReport rep;
    rep.n_disks = g_.n_disks();
    rep.ray_height = g_.ray_height();
    rep.edge_count = g_.edge_count();
    rep.vertex_count = g_.vertex_count();
    rep.label_conflicts = g_.label_conflicts();
    rep.bipartite = rep.label_conflicts.empty();
    report_ = &rep;

    for (const auto& r : g_.runs()) {
      auto& c = rep.components[to_string(r->tag)];
      c.max_adjacent_ratio = std::max(c.max_adjacent_ratio, r->internal_adjacent_ratio());
      c.max_nonadjacent_ratio = std::max(c.max_nonadjacent_ratio, r->internal_nonadjacent_ratio());
    }
    adjacency_at_shared_vertices();
    for (const auto& [name, c] : rep.components) {
      best_ = std::max(best_, c.max_nonadjacent_ratio);
    }
    best_ = std::max(best_, 1.0);
    nonadjacent_branch_and_bound();

    for (const auto& [name, c] : rep.components) {
      rep.min_angle = std::min(rep.min_angle, c.min_angle);
      rep.max_adjacent_diam_ratio = std::max(rep.max_adjacent_diam_ratio, c.max_adjacent_ratio);
      rep.max_nonadjacent_diam_over_dist =
          std::max(rep.max_nonadjacent_diam_over_dist, c.max_nonadjacent_ratio);
    }
    return rep;
  }

 private:
  void adjacency_at_shared_vertices() {
    const auto& runs = g_.runs();
    for (size_t i = 0; i < runs.size(); ++i) {
      for (size_t j = i + 1; j < runs.size(); ++j) {
        for (int si = 0; si < 2; ++si) {
          for (int sj = 0; sj < 2; ++sj) {
            if (!(runs[i]->key[si] == runs[j]->key[sj])) continue;
            const Side a = static_cast<Side>(si), b = static_cast<Side>(sj);
            const double da = runs[i]->edge_diam(a, 0.0), db = runs[j]->edge_diam(b, 0.0);
            const double ratio = std::max(da / db, db / da);
            const Complex ta = runs[i]->tangent(a), tb = runs[j]->tangent(b);
            const double cosang = std::clamp(ta.real() * tb.real() + ta.imag() * tb.imag(), -1.0, 1.0);
            const double angle = std::acos(cosang);
            for (const Run* r : {runs[i].get(), runs[j].get()}) {
              auto& c = report_->components[to_string(r->tag)];
              c.max_adjacent_ratio = std::max(c.max_adjacent_ratio, ratio);
              c.min_angle = std::min(c.min_angle, angle);
            }
          }
        }
      }
    }
  }

  std::vector<Block> top_blocks() const {
    std::vector<Block> out;
    for (const auto& r : g_.runs()) {
      const double c = r->edge_count();
      if (c < 1.0) continue;
      if (c < 2.0) {
        out.push_back({r.get(), Side::start, 0.0, c});
        continue;
      }
      const double s = std::clamp(r->split_index(), 1.0, c - 1.0);
      out.push_back({r.get(), Side::start, 0.0, s});
      out.push_back({r.get(), Side::end, 0.0, c - s});
    }
    return out;
  }

  // Conservative box distance between two blocks in a common frame.
  double block_distance(const Block& a, const Block& b) const {
    Box ba = a.run->block_box(a.side, a.k0, a.k1);
    Box bb = b.run->block_box(b.side, b.k0, b.k1);
    if (same_anchor(a, b)) {
      // Local offsets are accurate relative to their own magnitude.
      auto own = [](const Box& x) {
        return 16.0 * kUlp *
               std::max({std::fabs(x.x0), std::fabs(x.x1), std::fabs(x.y0), std::fabs(x.y1)});
      };
      return box_distance(ba.inflated(own(ba)), bb.inflated(own(bb)));
    }
    const Complex ca = a.anchor(), cb = b.anchor();
    ba = ba.translated(ca);
    bb = bb.translated(cb);
    const double scale = std::max(std::abs(ca), std::abs(cb)) + 4.0;
    return std::max(0.0, box_distance(ba, bb) - 16.0 * kUlp * scale);
  }

  double leaf_distance(const Block& a, const Block& b) const {
    double sa = 0.0, sb = 0.0;
    std::vector<Complex> pa = edge_samples(a, sa), pb = edge_samples(b, sb);
    double eps = 0.0;
    if (!same_anchor(a, b)) {
      for (auto& p : pa) p += a.anchor();
      for (auto& p : pb) p += b.anchor();
      eps = 16.0 * kUlp * (std::max(std::abs(a.anchor()), std::abs(b.anchor())) + 4.0);
    } else {
      // Local offsets carry errors relative to their own magnitude.
      double scale = 0.0;
      for (const auto& p : pa) scale = std::max(scale, std::abs(p));
      for (const auto& p : pb) scale = std::max(scale, std::abs(p));
      eps = 16.0 * kUlp * scale;
    }
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pa.size(); ++i) {
      for (size_t j = 0; j + 1 < pb.size(); ++j) {
        d = std::min(d, segment_distance(pa[i], pa[i + 1], pb[j], pb[j + 1]));
      }
    }
    return std::max(0.0, d - sa - sb - eps);
  }

  void record(const Block& a, const Block& b, double ratio) {
    for (const Block* x : {&a, &b}) {
      auto& c = report_->components[to_string(x->run->tag)];
      c.max_nonadjacent_ratio = std::max(c.max_nonadjacent_ratio, ratio);
    }
    best_ = std::max(best_, ratio);
  }

  void nonadjacent_branch_and_bound() {
    const std::vector<Block> blocks = top_blocks();
    std::vector<std::pair<Block, Block>> stack;
    for (size_t i = 0; i < blocks.size(); ++i) {
      for (size_t j = i + 1; j < blocks.size(); ++j) {
        if (blocks[i].run == blocks[j].run) continue;
        stack.emplace_back(blocks[i], blocks[j]);
        while (!stack.empty()) {
          auto [a, b] = stack.back();
          stack.pop_back();
          ++report_->block_pairs_visited;
          const double maxd = std::max(a.run->block_max_diam(a.side, a.k0, a.k1),
                                       b.run->block_max_diam(b.side, b.k0, b.k1));
          if (a.count() == 1.0 && b.count() == 1.0) {
            if (adjacent(a, b)) continue;
            ++report_->leaf_pairs;
            const double d = leaf_distance(a, b);
            if (d <= 0.0) {
              record(a, b, std::numeric_limits<double>::infinity());
            } else {
              const double da = a.run->edge_diam(a.side, a.k0);
              const double db = b.run->edge_diam(b.side, b.k0);
              record(a, b, std::max(da, db) / d);
            }
            continue;
          }
          const double dist = block_distance(a, b);
          if (dist > 0.0 && maxd / dist <= best_ * (1.0 + kPruneSlack)) continue;
          // Split the geometrically larger block (one edge cannot be split).
          const bool split_a =
              b.count() == 1.0 || (a.count() > 1.0 && extent(a) >= extent(b));
          Block& big = split_a ? a : b;
          const double mid = std::floor((big.k0 + big.k1) / 2.0);
          if (mid <= big.k0 || mid >= big.k1) {
            // Counts beyond double resolution: the block cannot be refined.
            record(a, b, maxd / std::max(dist, 0.0));
            continue;
          }
          Block lo = big, hi = big;
          lo.k1 = mid;
          hi.k0 = mid;
          if (&big == &a) {
            stack.emplace_back(hi, b);
            stack.emplace_back(lo, b);
          } else {
            stack.emplace_back(a, hi);
            stack.emplace_back(a, lo);
          }
        }
      }
    }
  }

  const Graph& g_;
  GeometryReport* report_ = nullptr;
  double best_ = 1.0;
};

}  // namespace

double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
  auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  auto point_seg = [](Complex p, Complex s0, Complex s1) {
    const Complex d = s1 - s0;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((p - s0).real() * d.real() + (p - s0).imag() * d.imag()) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (s0 + t * d));
  };
  // Proper intersection test. A cross product is only trusted when it
  // exceeds its rounding error; nearly collinear pairs fall through to the
  // endpoint distances, which are exact for non-crossing segments.
  auto sign = [&](Complex u, Complex v) {
    const double c = cross(u, v);
    const double err = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(u) * std::abs(v);
    return c > err ? 1 : (c < -err ? -1 : 0);
  };
  const int s1 = sign(a1 - a0, b0 - a0), s2 = sign(a1 - a0, b1 - a0);
  const int s3 = sign(b1 - b0, a0 - b0), s4 = sign(b1 - b0, a1 - b0);
  if (s1 * s2 < 0 && s3 * s4 < 0) return 0.0;
  return std::min({point_seg(a0, b0, b1), point_seg(a1, b0, b1), point_seg(b0, a0, a1),
                   point_seg(b1, a0, a1)});
}

GeometryReport check_bounded_geometry(const Graph& g) { return Checker(g).run(); }

nlohmann::json to_json(const GeometryReport& r) {
  nlohmann::json comps = nlohmann::json::object();
  for (const auto& [name, c] : r.components) {
    comps[name] = {{"min_angle", c.min_angle},
                   {"max_adjacent_ratio", c.max_adjacent_ratio},
                   {"max_nonadjacent_ratio", c.max_nonadjacent_ratio}};
  }
  return {{"n_disks", r.n_disks},
          {"ray_height", r.ray_height},
          {"edge_count", r.edge_count},
          {"vertex_count", r.vertex_count},
          {"min_angle", r.min_angle},
          {"max_adjacent_diam_ratio", r.max_adjacent_diam_ratio},
          {"max_nonadjacent_diam_over_dist", r.max_nonadjacent_diam_over_dist},
          {"bipartite", r.bipartite},
          {"label_conflicts", r.label_conflicts},
          {"block_pairs_visited", r.block_pairs_visited},
          {"leaf_pairs", r.leaf_pairs},
          {"components", comps}};
}

}  // namespace wanderlab
