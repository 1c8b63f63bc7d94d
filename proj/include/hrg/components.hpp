#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrg/graph.hpp"

namespace hrg {

/// A connected component re-indexed to 0..k-1. Degrees are the parent's: every
/// member's neighbors lie inside the component.
class ComponentView {
 public:
  ComponentView(GraphPtr parent, std::vector<VertexId> members);

  const GeoGraph& parent() const { return *parent_; }
  const GraphPtr& parent_ptr() const { return parent_; }

  std::size_t size() const { return members_.size(); }
  std::uint64_t vol() const { return vol_; }
  std::uint64_t edge_count() const { return local_.edge_count(); }

  std::span<const VertexId> members() const { return members_; }
  VertexId global_id(VertexId local) const { return members_[local]; }
  std::optional<VertexId> local_id(VertexId global) const;

  std::span<const VertexId> neighbors(VertexId local) const { return local_.neighbors(local); }
  std::uint32_t degree(VertexId local) const { return local_.degree(local); }
  bool has_edge(VertexId a, VertexId b) const { return local_.has_edge(a, b); }
  const PolarPoint& point(VertexId local) const { return parent_->point(members_[local]); }
  const Adjacency& adjacency() const { return local_; }

 private:
  GraphPtr parent_;
  std::vector<VertexId> members_;
  Adjacency local_;
  std::uint64_t vol_ = 0;
};

// Components ordered by size descending, ties by smallest member.
std::vector<ComponentView> connected_components(const GraphPtr& graph);

// The component holding B_O(R/2); ErrorCode::no_center if that ball is empty.
ComponentView center_component(const GraphPtr& graph);

// Largest component.
ComponentView giant_component(const GraphPtr& graph);

enum class RegionKind { sector, truncated_sector, band, half_disk, ball };

/// Sector membership: (theta - start) mod 2pi in [0, width), start = center - width/2.
/// Opposite half-disks therefore partition the disk; width 2pi covers it entirely.
struct Region {
  RegionKind kind = RegionKind::sector;
  double center = 0.0;      // sector center angle; half-disk reference angle
  double width = kTwoPi;    // sector angular width in [0, 2pi]
  double radius = 0.0;      // truncation radius (truncated_sector) or ball radius
  int band = 1;

  static Region sector(double center, double width) { return {RegionKind::sector, center, width, 0.0, 1}; }
  static Region truncated_sector(double center, double width, double radius) {
    return {RegionKind::truncated_sector, center, width, radius, 1};
  }
  static Region band_of_index(int ell) { return {RegionKind::band, 0.0, kTwoPi, 0.0, ell}; }
  static Region half_disk(double reference) {
    return {RegionKind::half_disk, reference, std::numbers::pi, 0.0, 1};
  }
  static Region ball(double radius) { return {RegionKind::ball, 0.0, kTwoPi, radius, 1}; }

  bool contains(const PolarPoint& p) const;
};

bool in_sector(double theta, double center, double width);

std::vector<VertexId> band(const GeoGraph& graph, int ell);
std::vector<VertexId> region_members(const GeoGraph& graph, const Region& region);

enum class DiameterMode { exact, sampled };

struct DiameterResult {
  std::uint32_t value = 0;
  bool lower_bound = false;  // true for sampled mode; never presented as exact
  DiameterMode mode = DiameterMode::exact;
  std::uint32_t sweeps = 0;
};

inline constexpr std::size_t exact_diameter_limit = 20'000;

DiameterResult diameter(const ComponentView& h, DiameterMode mode, std::uint64_t seed = 0);

// Hop distances from source (local ids); unreachable entries hold UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Adjacency& adjacency, VertexId source);

}  // namespace hrg
