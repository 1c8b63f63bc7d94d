#include <doctest.h>

#include <numbers>
#include <sstream>

#include "hrg/error.hpp"
#include "hrg/graph.hpp"

using namespace hrg;

namespace {

PointSet points_of(const ModelParams& params, std::vector<PolarPoint> pts) {
  PointSet set;
  set.params = params;
  set.points = std::move(pts);
  return set;
}

// Independent all-pairs oracle using the law of cosines directly.
std::vector<Edge> brute_edges(const PointSet& set) {
  const double R = set.params.radius();
  std::vector<Edge> out;
  for (VertexId u = 0; u < set.points.size(); ++u) {
    for (VertexId v = u + 1; v < set.points.size(); ++v) {
      if (hyperbolic_distance(set.points[u], set.points[v]) <= R) out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("coincident and antipodal points") {
  const auto params = ModelParams::make(0.75, 0.0, 100);
  const double R = params.radius();
  const auto same = build_graph(points_of(params, {{R - 0.1, 1.0}, {R - 0.1, 1.0}}));
  CHECK(same->edge_count() == 1);
  const auto far = build_graph(points_of(params, {{R - 0.1, 0.0}, {R - 0.1, std::numbers::pi}}));
  CHECK(far->edge_count() == 0);
  CHECK(naive_build(points_of(params, {{R - 0.1, 1.0}, {R - 0.1, 1.0}}))->edge_count() == 1);
  CHECK(naive_build(points_of(params, {{3.0, 1.0}}))->edge_count() == 0);
}

TEST_CASE("indexed construction equals the quadratic oracle") {
  int instances = 0;
  for (double alpha : {0.55, 0.75, 0.95}) {
    for (std::uint64_t n : {50ull, 150ull, 300ull}) {
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const PointSet set = sample_points(ModelParams::make(alpha, 0.0, n, SamplingMode::uniform, seed));
        const auto fast = build_graph(set);
        CHECK(fast->edges() == naive_build(set)->edges());
        CHECK(fast->edges() == brute_edges(set));
        ++instances;
      }
    }
  }
  CHECK(instances == 225);
}

TEST_CASE("threaded construction is identical") {
  const PointSet set = sample_points(ModelParams::make(0.7, 0.5, 6000, SamplingMode::poisson, 9));
  BuildOptions opts;
  opts.threads = 3;
  CHECK(build_graph(set, opts)->edges() == build_graph(set)->edges());
}

TEST_CASE("adjacency invariants") {
  const auto g = build_graph(sample_points(ModelParams::make(0.6, 0.0, 2000, SamplingMode::uniform, 4)));
  std::uint64_t degree_sum = 0;
  for (VertexId u = 0; u < g->vertex_count(); ++u) {
    const auto row = g->neighbors(u);
    degree_sum += g->degree(u);
    CHECK(row.size() == g->degree(u));
    for (std::size_t i = 0; i < row.size(); ++i) {
      CHECK(row[i] != u);
      if (i > 0) CHECK(row[i - 1] < row[i]);
      CHECK(g->has_edge(row[i], u));
    }
  }
  CHECK(degree_sum == 2 * g->edge_count());
}

TEST_CASE("edge lists are validated") {
  const auto params = ModelParams::make(0.75, 0.0, 3);
  std::vector<PolarPoint> coords{{1, 0}, {1, 1}, {1, 2}};
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const std::vector<Edge> range{{0, 3}};
  CHECK_THROWS_AS(graph_from_edges(params, coords, loop), Error);
  CHECK_THROWS_AS(graph_from_edges(params, coords, dup), Error);
  CHECK_THROWS_AS(graph_from_edges(params, coords, range), Error);
}

TEST_CASE("naive build guard") {
  const PointSet set = sample_points(ModelParams::make(0.75, 0.0, 10001, SamplingMode::uniform, 1));
  try {
    naive_build(set);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::guard_exceeded);
  }
}

TEST_CASE("graph text round trip") {
  const auto g = build_graph(sample_points(ModelParams::make(0.8, 0.3, 400, SamplingMode::uniform, 12)));
  std::stringstream io;
  write_graph(io, *g);
  const auto back = read_graph(io);
  CHECK(back->edges() == g->edges());
  REQUIRE(back->vertex_count() == g->vertex_count());
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    CHECK(back->point(v).r == g->point(v).r);
    CHECK(back->point(v).theta == g->point(v).theta);
  }
  std::stringstream truncated("hrg v1 0.75 0 2 uniform 1 1.3862943611198906\n0 0.5 0\n1 0.5 1\nedges 2\n0 1\n");
  CHECK_THROWS_AS(read_graph(truncated), Error);
}
