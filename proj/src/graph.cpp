#include "hrg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "hrg/error.hpp"

namespace hrg {

Adjacency::Adjacency(std::vector<std::uint64_t> offsets, std::vector<VertexId> targets)
    : offsets_(std::move(offsets)), targets_(std::move(targets)) {}

Adjacency Adjacency::from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
  std::vector<std::uint64_t> offsets(vertex_count + 1, 0);
  for (const auto& [u, v] : edges) {
    require(u < vertex_count && v < vertex_count, ErrorCode::invalid_argument, "edge endpoint out of range");
    require(u != v, ErrorCode::invalid_argument, "self-loops are not allowed");
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  for (std::size_t i = 0; i < vertex_count; ++i) offsets[i + 1] += offsets[i];
  std::vector<VertexId> targets(offsets.back());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    targets[cursor[u]++] = v;
    targets[cursor[v]++] = u;
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto first = targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    require(std::adjacent_find(first, last) == last, ErrorCode::invalid_argument, "duplicate edge");
  }
  return Adjacency(std::move(offsets), std::move(targets));
}

bool Adjacency::has_edge(VertexId u, VertexId v) const {
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

GeoGraph::GeoGraph(ModelParams params, std::vector<PolarPoint> coords, Adjacency adjacency)
    : params_(params), coords_(std::move(coords)), adjacency_(std::move(adjacency)) {
  require(adjacency_.vertex_count() == coords_.size(), ErrorCode::internal,
          "adjacency and coordinate counts differ");
  const DiskModel disk = params_.disk();
  levels_ = compute_levels(disk, default_slack(disk));
}

std::vector<Edge> GeoGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

struct BandEntry {
  double theta;
  VertexId id;
};

// Vertices bucketed by band, each bucket sorted by angle.
class BandIndex {
 public:
  explicit BandIndex(std::span<const PolarPoint> points) {
    int top = 1;
    for (const auto& p : points) top = std::max(top, band_of(p.r));
    bands_.resize(static_cast<std::size_t>(top) + 1);
    for (VertexId v = 0; v < points.size(); ++v) {
      bands_[static_cast<std::size_t>(band_of(points[v].r))].push_back({points[v].theta, v});
    }
    for (auto& band : bands_) {
      std::sort(band.begin(), band.end(), [](const BandEntry& a, const BandEntry& b) {
        return a.theta < b.theta || (a.theta == b.theta && a.id < b.id);
      });
    }
  }

  int top_band() const { return static_cast<int>(bands_.size()) - 1; }
  std::span<const BandEntry> band(int ell) const { return bands_[static_cast<std::size_t>(ell)]; }

 private:
  std::vector<std::vector<BandEntry>> bands_;
};

template <class Visit>
void visit_arc(std::span<const BandEntry> band, double lo, double hi, Visit&& visit) {
  auto by_theta = [](const BandEntry& e, double t) { return e.theta < t; };
  auto first = std::lower_bound(band.begin(), band.end(), lo, by_theta);
  auto last = std::upper_bound(band.begin(), band.end(), hi,
                               [](double t, const BandEntry& e) { return t < e.theta; });
  for (auto it = first; it < last; ++it) visit(*it);
}

void collect_neighbors(VertexId u, std::span<const PolarPoint> points, const BandIndex& index, double R,
                       std::vector<VertexId>& out) {
  out.clear();
  const PolarPoint& pu = points[u];
  auto test = [&](const BandEntry& e) {
    if (e.id != u && edge_predicate(pu, points[e.id], R)) out.push_back(e.id);
  };
  for (int ell = 1; ell <= index.top_band(); ++ell) {
    const auto band = index.band(ell);
    if (band.empty()) continue;
    const double inner = static_cast<double>(ell - 1);
    // Threshold angle decreases in r_v, so the band's inner radius bounds the window.
    double window = std::numbers::pi;
    if (pu.r + inner > R) window = angle_threshold(R, pu.r, inner) * (1.0 + 1e-9) + 1e-12;
    if (window >= std::numbers::pi) {
      for (const auto& e : band) test(e);
      continue;
    }
    const double lo = pu.theta - window;
    const double hi = pu.theta + window;
    if (lo < 0.0) {
      visit_arc(band, lo + kTwoPi, kTwoPi, test);
      visit_arc(band, 0.0, hi, test);
    } else if (hi >= kTwoPi) {
      visit_arc(band, lo, kTwoPi, test);
      visit_arc(band, 0.0, hi - kTwoPi, test);
    } else {
      visit_arc(band, lo, hi, test);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

GraphPtr build_graph(const PointSet& set, const BuildOptions& options) {
  const std::span<const PolarPoint> points = set.points;
  const std::size_t n = points.size();
  require(n < std::numeric_limits<VertexId>::max(), ErrorCode::guard_exceeded, "too many points");
  const double R = set.params.radius();
  const BandIndex index(points);

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n / 1024 + 1)));
  // Each worker owns a contiguous block of source vertices and its own target buffer.
  std::vector<std::vector<std::uint32_t>> degrees(workers);
  std::vector<std::vector<VertexId>> blocks(workers);
  auto block_begin = [&](unsigned w) { return n * w / workers; };
  auto work = [&](unsigned w) {
    std::vector<VertexId> scratch;
    for (std::size_t u = block_begin(w); u < block_begin(w + 1); ++u) {
      collect_neighbors(static_cast<VertexId>(u), points, index, R, scratch);
      degrees[w].push_back(static_cast<std::uint32_t>(scratch.size()));
      blocks[w].insert(blocks[w].end(), scratch.begin(), scratch.end());
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::vector<std::uint64_t> offsets(n + 1, 0);
  std::vector<VertexId> targets;
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  targets.reserve(total);
  std::size_t v = 0;
  for (unsigned w = 0; w < workers; ++w) {
    for (auto d : degrees[w]) {
      offsets[v + 1] = offsets[v] + d;
      ++v;
    }
    targets.insert(targets.end(), blocks[w].begin(), blocks[w].end());
    std::vector<VertexId>().swap(blocks[w]);
  }
  return std::make_shared<const GeoGraph>(set.params, set.points, Adjacency(std::move(offsets), std::move(targets)));
}

GraphPtr naive_build(const PointSet& set) {
  const std::size_t n = set.points.size();
  if (n > naive_build_limit) {
    fail(ErrorCode::guard_exceeded, "naive_build refuses " + std::to_string(n) + " points (limit " +
                                        std::to_string(naive_build_limit) + ")");
  }
  const double R = set.params.radius();
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (edge_predicate(set.points[u], set.points[v], R)) edges.emplace_back(u, v);
    }
  }
  return std::make_shared<const GeoGraph>(set.params, set.points, Adjacency::from_edges(n, edges));
}

GraphPtr graph_from_edges(const ModelParams& params, std::vector<PolarPoint> coords, std::span<const Edge> edges) {
  const std::size_t n = coords.size();
  return std::make_shared<const GeoGraph>(params, std::move(coords), Adjacency::from_edges(n, edges));
}

void write_graph(std::ostream& out, const GeoGraph& graph) {
  write_point_header(out, graph.params());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    out << v << ' ' << format_real(graph.point(v).r) << ' ' << format_real(graph.point(v).theta) << '\n';
  }
  out << "edges " << graph.edge_count() << '\n';
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

GraphPtr read_graph(std::istream& in) {
  PointSet set = read_points(in);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::format, "missing `edges m` line");
  std::istringstream head(line);
  std::string tag;
  std::uint64_t m = 0;
  head >> tag >> m;
  require(!head.fail() && tag == "edges", ErrorCode::format, "malformed `edges m` line");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    VertexId u = 0, v = 0;
    in >> u >> v;
    require(!in.fail(), ErrorCode::format, "truncated edge list");
    require(u < v, ErrorCode::format, "edge lines must satisfy u < v");
    edges.emplace_back(u, v);
  }
  return graph_from_edges(set.params, std::move(set.points), edges);
}

}  // namespace hrg
