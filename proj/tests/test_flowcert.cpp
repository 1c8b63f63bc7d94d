#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hrg/error.hpp"
#include "hrg/flowcert.hpp"
#include "hrg/spectral.hpp"

using namespace hrg;

namespace {

ComponentView complete(std::size_t k) {
  std::vector<PolarPoint> coords(k, PolarPoint{1.0, 0.0});
  std::vector<Edge> edges;
  for (VertexId u = 0; u < k; ++u)
    for (VertexId v = u + 1; v < k; ++v) edges.emplace_back(u, v);
  auto g = graph_from_edges(ModelParams::make(0.75, 0.0, std::max<std::size_t>(k, 2)), coords, edges);
  std::vector<VertexId> members(k);
  for (VertexId v = 0; v < k; ++v) members[v] = v;
  return ComponentView(g, members);
}

// Elongated flow by explicit path enumeration over unordered pairs.
std::map<Edge, double> enumerated_flow(const ComponentView& h, const Levels& levels, double scale,
                                       std::uint64_t& structured_pairs) {
  std::map<Edge, double> out;
  for (VertexId s = 0; s < h.size(); ++s) {
    for (VertexId t = s + 1; t < h.size(); ++t) {
      const PairRoute r = pair_route(h, levels, s, t, scale);
      if (r.kind != RouteKind::fallback) ++structured_pairs;
      for (const auto& p : r.paths) {
        const double length = static_cast<double>(p.vertices.size() - 1);
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
          const Edge e{std::min(p.vertices[i], p.vertices[i + 1]), std::max(p.vertices[i], p.vertices[i + 1])};
          out[e] += p.flow * length;
        }
      }
    }
  }
  return out;
}

std::vector<ComponentView> modest_components(std::size_t max_k, std::size_t count) {
  std::vector<ComponentView> out;
  for (std::uint64_t seed = 0; out.size() < count && seed < 500; ++seed) {
    const double alpha = seed % 3 == 0 ? 0.6 : 0.75;
    const auto g = build_graph(sample_points(ModelParams::make(alpha, 0.0, 260, SamplingMode::uniform, seed)));
    auto h = center_component(g);
    if (h.size() >= 10 && h.size() <= max_k) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

TEST_CASE("complete graphs reach the exact gap") {
  for (std::size_t k : {2u, 3u, 5u, 8u}) {
    const auto h = complete(k);
    const auto cert = build_flow(h);
    CHECK(cert.demand_checked);
    CHECK(sinclair_bound(cert) == doctest::Approx(static_cast<double>(k) / static_cast<double>(k - 1)));
    CHECK(cert.fallback_pairs == k * (k - 1));
  }
}

TEST_CASE("aggregated loads equal explicit path enumeration") {
  const auto comps = modest_components(200, 12);
  REQUIRE(comps.size() >= 8);
  std::uint64_t structured = 0;
  for (const auto& h : comps) {
    for (std::optional<double> nu : {std::optional<double>{}, std::optional<double>{-2.0}}) {
      FlowOptions opts;
      opts.nu_prime = nu;
      const auto cert = build_flow(h, opts);
      REQUIRE(cert.demand_checked);
      std::uint64_t pairs = 0;
      const auto oracle = enumerated_flow(h, cert.levels, 1.0, pairs);
      structured += pairs;
      CHECK(cert.qprime_pairs + cert.qsecond_pairs == 2 * pairs);
      double worst = 0.0;
      for (std::size_t e = 0; e < cert.edges.size(); ++e) {
        const auto it = oracle.find(cert.edges[e]);
        const double expected = it == oracle.end() ? 0.0 : it->second;
        worst = std::max(worst, std::fabs(cert.edge_flow[e] - expected) / std::max(expected, 1e-300));
        if (expected == 0.0) CHECK(cert.edge_flow[e] == 0.0);
      }
      CHECK(worst <= 1e-12);
      CHECK(cert.qprime_pairs + cert.qsecond_pairs + cert.fallback_pairs == h.size() * (h.size() - 1));
    }
  }
  // Structured (non-fallback) routing has to be exercised somewhere.
  CHECK(structured > 0);
}

TEST_CASE("certificate is a sound lower bound") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 1500, SamplingMode::uniform, seed)));
    const auto h = center_component(g);
    const auto cert = build_flow(h);
    const auto gap = spectral_gap(h);
    CHECK(sinclair_bound(cert) <= gap.lambda1 * (1.0 + 1e-6));
    CHECK(cert.max_path_length <= cert.path_cap);
    CHECK(cert.max_segment_length <= cert.diameter + 1);
    std::uint64_t total = 0;
    for (auto c : cert.histogram) total += c;
    CHECK(total == cert.edges.size());
    double top = 0.0;
    for (double m : cert.class_max) top = std::max(top, m);
    CHECK(top == cert.rho_bar);
  }
}

TEST_CASE("doubling the demand doubles the congestion") {
  const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 800, SamplingMode::uniform, 2)));
  const auto h = center_component(g);
  FlowOptions twice;
  twice.demand_scale = 2.0;
  CHECK(build_flow(h, twice).rho_bar == doctest::Approx(2.0 * build_flow(h).rho_bar).epsilon(1e-12));
}

TEST_CASE("Q' path count agrees with enumeration") {
  int checked = 0;
  for (const auto& h : modest_components(200, 6)) {
    const Levels levels = flow_levels(h, -2.0);
    std::vector<VertexId> inner;
    for (VertexId v = 0; v < h.size(); ++v)
      if (h.point(v).r <= levels.ell_max) inner.push_back(v);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      for (std::size_t j = i + 1; j < inner.size() && j < i + 6; ++j) {
        const auto paths = qprime_paths(h, levels, inner[i], inner[j]);
        CHECK(qprime_path_count(h, levels, inner[i], inner[j]) == paths.size());
        CHECK(qprime_path_count(h, levels, inner[j], inner[i]) == paths.size());
        for (const auto& q : paths) {
          CHECK(h.has_edge(q[0], q[1]));
          CHECK(h.has_edge(q[1], q[2]));
          CHECK(h.has_edge(q[2], q[3]));
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("end segments") {
  const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 2000, SamplingMode::uniform, 9)));
  const auto h = center_component(g);
  const Levels levels = flow_levels(h);
  const auto d = diameter(h, DiameterMode::exact).value;
  for (VertexId s = 0; s < h.size(); s += 7) {
    const auto seg = end_segment(h, levels, s);
    CHECK(seg.path.front() == s);
    CHECK(seg.path.size() - 1 <= d + 1);
    for (std::size_t i = 0; i + 1 < seg.path.size(); ++i) CHECK(h.has_edge(seg.path[i], seg.path[i + 1]));
    if (h.point(s).r <= levels.ell_max) CHECK(seg.path.size() == 1);
  }
}

TEST_CASE("refusals") {
  const auto h = complete(4);
  try {
    pair_route(h, flow_levels(h), 1, 1);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
  FlowOptions small;
  small.exact_cap = 3;
  try {
    build_flow(h, small);
    FAIL("expected a guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::guard_exceeded);
  }
  auto cert = build_flow(h);
  cert.demand_checked = false;
  try {
    sinclair_bound(cert);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unchecked_demand);
  }
}

TEST_CASE("edge classes and output") {
  Levels L;
  L.ell_mid = 5;
  L.ell_max = 8;
  CHECK(classify_edge(2, 3, L) == EdgeClass::core);
  CHECK(classify_edge(5, 5, L) == EdgeClass::belt);
  CHECK(classify_edge(5, 7, L) == EdgeClass::belt_incident);
  CHECK(classify_edge(3, 7, L) == EdgeClass::spread_out);
  CHECK(classify_edge(6, 8, L) == EdgeClass::middle);
  CHECK(classify_edge(6, 9, L) == EdgeClass::remote);

  const auto h = complete(3);
  const auto cert = build_flow(h);
  std::ostringstream rows;
  write_edge_flows(rows, h, cert);
  std::string line;
  std::istringstream in(rows.str());
  std::getline(in, line);
  CHECK(line == "u,v,class,flow");
  int count = 0;
  while (std::getline(in, line)) ++count;
  CHECK(count == 3);
}
