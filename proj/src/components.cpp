#include "hrg/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

namespace hrg {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

Adjacency induce(const GeoGraph& parent, std::span<const VertexId> members) {
  std::vector<std::uint64_t> offsets(members.size() + 1, 0);
  std::vector<VertexId> targets;
  targets.reserve(members.size() * 4);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (VertexId w : parent.neighbors(members[i])) {
      auto it = std::lower_bound(members.begin(), members.end(), w);
      require(it != members.end() && *it == w, ErrorCode::invalid_argument,
              "component members are not closed under adjacency");
      targets.push_back(static_cast<VertexId>(it - members.begin()));
    }
    offsets[i + 1] = targets.size();
  }
  return Adjacency(std::move(offsets), std::move(targets));
}

// Label components with BFS; returns labels and per-label member lists.
std::vector<std::vector<VertexId>> label_components(const GeoGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> label(n, kUnreached);
  std::vector<std::vector<VertexId>> groups;
  std::vector<VertexId> queue;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kUnreached) continue;
    const auto id = static_cast<std::uint32_t>(groups.size());
    queue.assign(1, s);
    label[s] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (VertexId w : g.neighbors(queue[head])) {
        if (label[w] == kUnreached) {
          label[w] = id;
          queue.push_back(w);
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    groups.push_back(queue);
  }
  return groups;
}

}  // namespace

ComponentView::ComponentView(GraphPtr parent, std::vector<VertexId> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  require(parent_ != nullptr, ErrorCode::invalid_argument, "component needs a parent graph");
  require(!members_.empty(), ErrorCode::invalid_argument, "component must be non-empty");
  require(std::is_sorted(members_.begin(), members_.end()), ErrorCode::invalid_argument,
          "component members must be sorted");
  local_ = induce(*parent_, members_);
  for (VertexId v = 0; v < members_.size(); ++v) vol_ += local_.degree(v);
  const auto dist = bfs_distances(local_, 0);
  require(std::none_of(dist.begin(), dist.end(), [](std::uint32_t d) { return d == kUnreached; }),
          ErrorCode::disconnected, "component members do not induce a connected subgraph");
}

std::optional<VertexId> ComponentView::local_id(VertexId global) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), global);
  if (it == members_.end() || *it != global) return std::nullopt;
  return static_cast<VertexId>(it - members_.begin());
}

std::vector<ComponentView> connected_components(const GraphPtr& graph) {
  auto groups = label_components(*graph);
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<ComponentView> out;
  out.reserve(groups.size());
  for (auto& group : groups) out.emplace_back(graph, std::move(group));
  return out;
}

ComponentView center_component(const GraphPtr& graph) {
  const double half = graph->radius() / 2.0;
  std::vector<VertexId> center;
  for (VertexId v = 0; v < graph->vertex_count(); ++v) {
    if (graph->point(v).r <= half) center.push_back(v);
  }
  if (center.empty()) fail(ErrorCode::no_center, "no vertex lies in B_O(R/2)");

  std::vector<std::uint8_t> seen(graph->vertex_count(), 0);
  std::vector<VertexId> queue{center.front()};
  seen[center.front()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (VertexId w : graph->neighbors(queue[head])) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  // Vertices of B_O(R/2) are pairwise adjacent, so this cannot fire on a valid graph.
  for (VertexId v : center) {
    require(seen[v] != 0, ErrorCode::internal, "B_O(R/2) vertices span several components");
  }
  std::sort(queue.begin(), queue.end());
  return ComponentView(graph, std::move(queue));
}

ComponentView giant_component(const GraphPtr& graph) {
  auto groups = label_components(*graph);
  require(!groups.empty(), ErrorCode::invalid_argument, "graph has no vertices");
  auto best = std::max_element(groups.begin(), groups.end(),
                               [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return ComponentView(graph, std::move(*best));
}

bool in_sector(double theta, double center, double width) {
  if (width >= kTwoPi) return true;
  if (width <= 0.0) return false;
  const double offset = normalize_angle(theta - (center - width / 2.0));
  return offset < width;
}

bool Region::contains(const PolarPoint& p) const {
  switch (kind) {
    case RegionKind::sector: return in_sector(p.theta, center, width);
    case RegionKind::truncated_sector: return p.r > radius && in_sector(p.theta, center, width);
    case RegionKind::band: return band_of(p.r) == band;
    case RegionKind::half_disk: return normalize_angle(p.theta - center) < std::numbers::pi;
    case RegionKind::ball: return p.r <= radius;
  }
  return false;
}

std::vector<VertexId> band(const GeoGraph& graph, int ell) {
  return region_members(graph, Region::band_of_index(ell));
}

std::vector<VertexId> region_members(const GeoGraph& graph, const Region& region) {
  require(region.width >= 0.0 && region.width <= kTwoPi, ErrorCode::invalid_argument,
          "region width must lie in [0, 2pi]");
  require(region.radius >= 0.0 && region.radius <= graph.radius(), ErrorCode::invalid_argument,
          "region radius must lie in [0, R]");
  std::vector<VertexId> out;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (region.contains(graph.point(v))) out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> bfs_distances(const Adjacency& adjacency, VertexId source) {
  std::vector<std::uint32_t> dist(adjacency.vertex_count(), kUnreached);
  std::vector<VertexId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId w : adjacency.neighbors(u)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

DiameterResult diameter(const ComponentView& h, DiameterMode mode, std::uint64_t seed) {
  const Adjacency& adj = h.adjacency();
  const std::size_t k = h.size();
  auto eccentricity = [&](VertexId s, VertexId* far) {
    const auto dist = bfs_distances(adj, s);
    std::uint32_t best = 0;
    VertexId arg = s;
    for (VertexId v = 0; v < k; ++v) {
      if (dist[v] > best) {
        best = dist[v];
        arg = v;
      }
    }
    if (far) *far = arg;
    return best;
  };

  DiameterResult result;
  result.mode = mode;
  if (mode == DiameterMode::exact) {
    if (k > exact_diameter_limit) {
      fail(ErrorCode::guard_exceeded, "exact diameter refuses k = " + std::to_string(k) +
                                          " (limit 20000); use sampled mode");
    }
    for (VertexId s = 0; s < k; ++s) result.value = std::max(result.value, eccentricity(s, nullptr));
    result.sweeps = static_cast<std::uint32_t>(k);
    return result;
  }

  result.lower_bound = true;
  Rng rng(seed);
  // Double sweep from vertex 0, then 64 random sources.
  VertexId a = 0, b = 0;
  result.value = eccentricity(0, &a);
  result.value = std::max(result.value, eccentricity(a, &b));
  result.value = std::max(result.value, eccentricity(b, nullptr));
  result.sweeps = 3;
  for (int i = 0; i < 64; ++i) {
    const auto s = static_cast<VertexId>(rng.below(k));
    result.value = std::max(result.value, eccentricity(s, nullptr));
    ++result.sweeps;
  }
  return result;
}

}  // namespace hrg
