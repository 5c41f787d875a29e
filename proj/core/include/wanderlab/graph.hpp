#pragma once

// The labeled bipartite graph T on the boundary of the model domain:
// the boundary of the half-strip, the circles bounding the disks D_n, the
// vertical connectors between them, the rays above the disks and the axis
// ray above i*pi/2, all reflected into the four quadrants.
//
// T has astronomically many edges (the horizontal sides carry
// K cosh(n pi) vertices, the circles 2 d_n), so the graph is stored
// implicitly as "runs": maximal chains of edges on one curve whose vertex
// positions have closed forms. Each run can be walked from either end,
// which keeps every offset accurate relative to the nearby end vertex.

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/model_map.hpp"
#include "wanderlab/parameters.hpp"

namespace wanderlab {

enum class ComponentTag { strip_boundary, disk_boundary, connector, ray, axis };
enum class EdgeKind { segment, circular_arc, ray_segment };

const char* to_string(ComponentTag tag);
const char* to_string(EdgeKind kind);

enum class Side { start = 0, end = 1 };

/// Identity of a run end vertex; equal keys mean a shared vertex.
struct VertexKey {
  enum Kind { corner, junction, disk_bottom, disk_top, free_end };
  Kind kind = free_end;
  long n = 0;
  int sx = 0;
  int sy = 0;
  bool operator==(const VertexKey&) const = default;
};

/// Axis-aligned box [x0, x1] x [y0, y1].
struct Box {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  Box translated(Complex c) const {
    return {x0 + c.real(), x1 + c.real(), y0 + c.imag(), y1 + c.imag()};
  }
  Box inflated(double e) const { return {x0 - e, x1 + e, y0 - e, y1 + e}; }
};

double box_distance(const Box& a, const Box& b);

/// One maximal chain of edges. Index k counts vertices (or edges) from the
/// chosen side; offsets are relative to the vertex at that side. Indices
/// are doubles because counts may exceed 2^53; exact integer semantics are
/// only relied on for indices near either end.
class Run {
 public:
  virtual ~Run() = default;

  ComponentTag tag = ComponentTag::strip_boundary;
  EdgeKind edge_kind = EdgeKind::segment;
  long n = 0;     // disk index (0 for the strip side and axis)
  int sx = 1;     // reflection signs applied to the quadrant-I geometry
  int sy = 1;
  std::array<VertexKey, 2> key{};
  std::array<Complex, 2> anchor{};  // global positions of the end vertices
  std::array<int, 2> label{1, 1};   // labels of the end vertices

  virtual double edge_count() const = 0;
  /// Offset of vertex k (from side s) relative to the vertex at side s.
  Complex vertex_offset(Side s, double k) const { return mirror(q_offset(s, k)); }
  /// Diameter of edge k (between vertices k and k+1, counted from side s).
  virtual double edge_diam(Side s, double k) const = 0;
  /// Box (relative to side s) containing edges [k0, k1).
  Box block_box(Side s, double k0, double k1) const;
  /// Largest / smallest edge diameter within [k0, k1).
  virtual double block_max_diam(Side s, double k0, double k1) const = 0;
  virtual double block_min_diam(Side s, double k0, double k1) const = 0;
  /// From-start index splitting the run near its geometric middle.
  virtual double split_index() const { return std::floor(edge_count() / 2.0); }
  /// Unit tangent of the first edge leaving the end vertex at side s.
  Complex tangent(Side s) const;
  /// Position of the point at parameter t in [0,1] along edge k (for arcs
  /// and segments alike), relative to side s.
  Complex edge_point(Side s, double k, double t) const { return mirror(q_point(s, k, t)); }
  /// Label of vertex k counted from side s (alternating).
  int vertex_label(Side s, double k) const;

  /// Within-run maxima of the adjacent diameter ratio and of
  /// diam/dist over nonadjacent edge pairs.
  virtual double internal_adjacent_ratio() const = 0;
  virtual double internal_nonadjacent_ratio() const = 0;

  /// Enclosure [lo, hi] of the sum of squared edge diameters over [k0, k1).
  virtual void block_sum_sq(Side s, double k0, double k1, double& lo, double& hi) const;
  /// True for circular-arc runs.
  virtual bool is_arc() const { return false; }
  /// True when the run's edges are horizontal segments.
  bool is_horizontal() const;

  std::string name() const;

 protected:
  Complex mirror(Complex q) const { return {sx * q.real(), sy * q.imag()}; }
  virtual Complex q_offset(Side s, double k) const = 0;
  virtual Complex q_point(Side s, double k, double t) const;
  virtual Box q_block_box(Side s, double k0, double k1) const;
};

/// Per-n quantities of the connector between the horizontal side and D_n.
/// The segment is first cut into m uniform edges of length u close to
/// min(ell, Lambda/4) (this depends on d_n only); the lowest of them is then
/// cut dyadically toward the junction, u/2^J, u/2^J, u/2^{J-1}, ..., u/2,
/// with J the smallest depth reaching L (one more when needed for the
/// labels). Only the dyadic part depends on lambda, and refining it always
/// lowers the sum of squared lengths.
struct ConnectorPlan {
  long n = 0;
  double L = 0.0;         // first horizontal edge length at the junction
  double ell = 0.0;       // pi / d_n: arc length of the circle edges
  double mu = 0.0;        // target length of the uniform edges
  std::vector<double> bottom;   // dyadic pieces from the junction upward
  double middle_count = 0.0;    // uniform edges above the dyadic pieces
  double middle_length = 0.0;   // u
  int depth = 0;                // J
  bool parity_adjusted = false; // J raised by one to fix the labels

  double edge_count() const;
  /// Length of edge i counted from the junction.
  double length(double i) const;
  /// Distance from the junction to vertex i.
  double offset(double i) const;
};

ConnectorPlan plan_connector(long n, const AnchorData& anchor, double d,
                             long lambda_over_pi);

struct GraphOptions {
  long n_disks = 10;
  double ray_height = 0.0;  // 0: truncate rays at height a_{N}
};

class Graph {
 public:
  Graph(const ParameterSet& params, const GraphOptions& options);

  const ParameterSet& params() const { return params_; }
  long n_disks() const { return options_.n_disks; }
  double ray_height() const { return height_; }
  const std::vector<std::unique_ptr<Run>>& runs() const { return runs_; }
  const AnchorTable& anchors() const { return anchors_; }
  const std::vector<ConnectorPlan>& connectors() const { return plans_; }

  double edge_count() const;
  double vertex_count() const;

  /// Every shared vertex carries one label across runs, and every run's
  /// label alternation is consistent with its end labels. Empty when valid.
  std::vector<std::string> label_conflicts() const;

 private:
  ParameterSet params_;
  GraphOptions options_;
  AnchorTable anchors_;
  double height_ = 0.0;
  std::vector<ConnectorPlan> plans_;
  std::vector<std::unique_ptr<Run>> runs_;
};

Graph build_graph(const ParameterSet& params, long n_disks);

/// Explicit vertex/edge lists, available when the graph is small.
struct ExplicitVertex {
  Complex position;
  int label = 1;
};
struct ExplicitEdge {
  EdgeKind kind = EdgeKind::segment;
  ComponentTag tag = ComponentTag::strip_boundary;
  long n = 0;
  size_t v0 = 0, v1 = 0;
  double diameter = 0.0;
  Complex center;          // arcs only
};
struct ExplicitGraph {
  std::vector<ExplicitVertex> vertices;
  std::vector<ExplicitEdge> edges;
};

/// Throws RangeError when the graph has more than max_edges edges.
ExplicitGraph materialize(const Graph& g, double max_edges = 2e5);

nlohmann::json graph_to_json(const Graph& g, double max_edges = 2e5);

struct StripEdgeImage {
  Complex v0, v1;
  double image_length = 0.0;
};

/// Lengths of the images lambda*sinh(v) of consecutive boundary vertices of
/// the half-strip: vertical side (i asin(k/K)) then horizontal side
/// (acosh(k/K) + i pi/2) for K <= k <= k_max.
std::vector<StripEdgeImage> tau_size_strip_edges(const ParameterSet& params, long k_max);

/// acosh(c + delta) - acosh(c) without cancellation (c >= 1, delta > 0).
double acosh_step(double c, double delta);

}  // namespace wanderlab
