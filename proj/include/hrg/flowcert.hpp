#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hrg/components.hpp"

namespace hrg {

/// Layers used by the flow. With no override, nu' is the default slack when the
/// resulting levels are ordered and 0 otherwise; an explicit value is used as given.
Levels flow_levels(const ComponentView& h, std::optional<double> nu_prime = std::nullopt);

// Length-3 paths s-u-w-t, u in N(s) ∩ P_{l~(s)}, w in N(t) ∩ P_{l~(t)}, u != t, w != s.
// s and t are local ids inside B_O(ell_max), s != t.
std::uint64_t qprime_path_count(const ComponentView& h, const Levels& levels, VertexId s, VertexId t);
std::vector<std::array<VertexId, 4>> qprime_paths(const ComponentView& h, const Levels& levels, VertexId s,
                                                  VertexId t);

struct EndSegment {
  std::vector<VertexId> path;  // s first, target in B_O(ell_max) last
  bool fallback = false;       // nearest-vertex BFS instead of the u_b construction
  std::uint32_t inner_internal = 0;  // internal vertices of the path inside B_O(ell_max)
};

// Route from s (outside B_O(ell_max)) to a vertex of P_{ell_max}, via the P_{ell_max+1}
// vertex u_b that brackets s angularly. For s inside B_O(ell_max) the path is {s}.
EndSegment end_segment(const ComponentView& h, const Levels& levels, VertexId s);

enum class RouteKind { qprime, qsecond, fallback };
const char* to_string(RouteKind kind);

struct RoutedPath {
  std::vector<VertexId> vertices;
  double flow = 0.0;
};

struct PairRoute {
  RouteKind kind = RouteKind::fallback;
  double demand = 0.0;
  std::vector<RoutedPath> paths;
};

// All paths carrying the (s, t) commodity, enumerated explicitly.
PairRoute pair_route(const ComponentView& h, const Levels& levels, VertexId s, VertexId t,
                     double demand_scale = 1.0);

enum class EdgeClass { core, spread_out, belt, belt_incident, middle, remote };
inline constexpr std::size_t edge_class_count = 6;
const char* to_string(EdgeClass c);
EdgeClass classify_edge(int band_a, int band_b, const Levels& levels);

struct FlowOptions {
  std::size_t exact_cap = 3000;
  std::optional<double> nu_prime;  // nullopt: automatic choice, see flow_levels
  double demand_scale = 1.0;
  std::size_t sample_pairs = 1000;  // pairs re-routed explicitly for the demand check
  std::uint64_t seed = 0;
};

inline constexpr std::size_t flow_histogram_bins = 8;

struct FlowCertificate {
  std::size_t k = 0;
  Levels levels;
  double rho_bar = 0.0;
  double lower_bound = 0.0;
  std::vector<Edge> edges;          // local ids, u < v
  std::vector<double> edge_flow;    // elongated flow, equal in both orientations
  // Bin i counts edges with flow / rho_bar in (10^-(i+1), 10^-i]; the last bin collects the rest.
  std::array<std::uint64_t, flow_histogram_bins> histogram{};
  std::array<double, edge_class_count> class_max{};
  std::array<std::uint64_t, edge_class_count> class_edges{};

  bool demand_checked = false;
  double demand_error = 0.0;        // worst relative demand mismatch seen
  std::uint64_t qprime_pairs = 0;   // ordered pairs
  std::uint64_t qsecond_pairs = 0;
  std::uint64_t fallback_pairs = 0;
  std::uint64_t segment_fallbacks = 0;    // vertices whose end segment used the BFS fallback
  std::uint64_t outer_vertices = 0;       // vertices outside B_O(ell_max)
  std::uint64_t structured_segments = 0;  // outer vertices with <= 1 internal vertex inside B_O(ell_max)
  std::uint32_t diameter = 0;
  std::uint32_t path_cap = 0;             // D' = 2D + 5
  std::uint32_t max_path_length = 0;
  std::uint32_t max_segment_length = 0;
};

FlowCertificate build_flow(const ComponentView& h, const FlowOptions& options = {});

// 1 / rho_bar; ErrorCode::unchecked_demand unless the demand check passed.
double sinclair_bound(const FlowCertificate& certificate);

// CSV, columns: k,rho_bar,lower_bound,demand_checked,demand_error,qprime_pairs,qsecond_pairs,
// fallback_pairs,segment_fallbacks,diameter,path_cap,max_path_length,nu_prime,ell_mid,ell_max
void write_certificate_header(std::ostream& out);
void write_certificate_row(std::ostream& out, const FlowCertificate& certificate);
// CSV, columns: u,v,class,flow (global vertex ids)
void write_edge_flows(std::ostream& out, const ComponentView& h, const FlowCertificate& certificate);

}  // namespace hrg
