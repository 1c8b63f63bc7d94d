#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hrg/geometry.hpp"
#include "hrg/sampler.hpp"

namespace hrg {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

// Compressed sparse rows; each row sorted ascending, no duplicates.
class Adjacency {
 public:
  Adjacency() : offsets_{0} {}
  Adjacency(std::vector<std::uint64_t> offsets, std::vector<VertexId> targets);

  static Adjacency from_edges(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return offsets_.size() - 1; }
  std::uint64_t edge_count() const { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]); }
  bool has_edge(VertexId u, VertexId v) const;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<VertexId> targets_;
};

/// Threshold graph on a point set: uv is an edge iff d_h(u, v) <= R.
/// Immutable after construction; share it through std::shared_ptr.
class GeoGraph {
 public:
  GeoGraph(ModelParams params, std::vector<PolarPoint> coords, Adjacency adjacency);

  const ModelParams& params() const { return params_; }
  const Levels& levels() const { return levels_; }
  double radius() const { return params_.radius(); }

  std::size_t vertex_count() const { return coords_.size(); }
  std::uint64_t edge_count() const { return adjacency_.edge_count(); }

  const PolarPoint& point(VertexId v) const { return coords_[v]; }
  std::span<const PolarPoint> points() const { return coords_; }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.neighbors(v); }
  std::uint32_t degree(VertexId v) const { return adjacency_.degree(v); }
  bool has_edge(VertexId u, VertexId v) const { return adjacency_.has_edge(u, v); }
  const Adjacency& adjacency() const { return adjacency_; }

  std::vector<Edge> edges() const;  // u < v, lexicographic

 private:
  ModelParams params_;
  Levels levels_;
  std::vector<PolarPoint> coords_;
  Adjacency adjacency_;
};

using GraphPtr = std::shared_ptr<const GeoGraph>;

struct BuildOptions {
  unsigned threads = 1;
};

// Band/angle index construction; exact edge set.
GraphPtr build_graph(const PointSet& points, const BuildOptions& options = {});

// All-pairs oracle; refuses more than naive_build_limit points.
inline constexpr std::size_t naive_build_limit = 10'000;
GraphPtr naive_build(const PointSet& points);

// Graph with explicit edges over given coordinates (deserialization, hand-built test graphs).
GraphPtr graph_from_edges(const ModelParams& params, std::vector<PolarPoint> coords,
                          std::span<const Edge> edges);

// Point-set text format followed by `edges m` and one `u v` line per edge (u < v).
void write_graph(std::ostream& out, const GeoGraph& graph);
GraphPtr read_graph(std::istream& in);

}  // namespace hrg
