#pragma once

// Uniformly bounded geometry of the graph: smallest angle between adjacent
// edges, largest diameter ratio of adjacent edges (the constant M), and the
// largest diam(e)/dist(e, e') over nonadjacent pairs.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wanderlab/graph.hpp"

namespace wanderlab {

struct ComponentStats {
  double min_angle = M_PI;
  double max_adjacent_ratio = 1.0;
  double max_nonadjacent_ratio = 0.0;
};

struct GeometryReport {
  long n_disks = 0;
  double ray_height = 0.0;
  double edge_count = 0.0;
  double vertex_count = 0.0;
  double min_angle = M_PI;
  double max_adjacent_diam_ratio = 1.0;
  double max_nonadjacent_diam_over_dist = 0.0;
  std::map<std::string, ComponentStats> components;
  bool bipartite = true;
  std::vector<std::string> label_conflicts;
  long block_pairs_visited = 0;
  long leaf_pairs = 0;
};

/// Exact maxima over the graph. Nonadjacent pairs are found by a
/// branch-and-bound over run blocks whose bound (largest diameter over box
/// distance) is conservative, so no pair exceeding the reported maximum is
/// ever pruned.
GeometryReport check_bounded_geometry(const Graph& g);

nlohmann::json to_json(const GeometryReport& r);

/// Lower bound on the distance between two edges given as sample polylines
/// with a sagitta allowance (exact for segments).
double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1);

}  // namespace wanderlab
