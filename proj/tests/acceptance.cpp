// Acceptance suite AC-1..AC-12. One line per criterion; the exit status is nonzero
// when a criterion fails for a reason not listed under known deviations in README.md.
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hrg/conductance.hpp"
#include "hrg/experiment.hpp"
#include "hrg/flowcert.hpp"
#include "hrg/spectral.hpp"

using namespace hrg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool known = false;  // failure documented as unattainable at desk scale
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<std::uint64_t> powers_of_two(int lo, int hi) {
  std::vector<std::uint64_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

std::size_t failed_rows(const std::vector<SweepRow>& rows) {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) {
    return r.status != "ok" && r.status != "empty";
  }));
}

Outcome ac1() {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, instances = 0;
  for (double alpha : {0.55, 0.75, 0.95}) {
    for (std::uint64_t n : {50ull, 150ull, 300ull}) {
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PointSet set = sample_points(ModelParams::make(alpha, 0.0, n, SamplingMode::uniform, seed));
        mismatches += build_graph(set)->edges() != naive_build(set)->edges();
        ++instances;
      }
    }
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 120.0,
          std::to_string(instances) + " instances, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.1f s", t)};
}

Outcome ac2() {
  double worst_total = 0.0, worst_rel = 0.0;
  for (double alpha : {0.55, 0.75, 0.95}) {
    for (double R : {10.0, 25.0, 30.0, 40.0, 60.0}) {
      const DiskModel disk{alpha, R};
      worst_total = std::max(worst_total, std::fabs(ball_measure_exact(R, disk) - 1.0));
      if (R < 25.0) continue;
      for (double rho = R - 5.0; rho <= R + 1e-12; rho += 0.25) {
        const double exact = ball_measure_exact(rho, disk);
        worst_rel = std::max(worst_rel, std::fabs(ball_measure_asymptotic(rho, disk) / exact - 1.0));
      }
    }
  }
  return {worst_total < 1e-12 && worst_rel <= 0.10,
          "max |mu(B(R)) - 1| = " + fmt("%.2e", worst_total) + ", max asymptotic rel. error " +
              fmt("%.2e", worst_rel)};
}

ComponentView from_edges(std::size_t k, const std::vector<Edge>& edges) {
  std::vector<PolarPoint> coords(k, PolarPoint{1.0, 0.0});
  auto g = graph_from_edges(ModelParams::make(0.75, 0.0, std::max<std::size_t>(k, 2)), coords, edges);
  std::vector<VertexId> members(k);
  for (VertexId v = 0; v < k; ++v) members[v] = v;
  return ComponentView(g, members);
}

Outcome ac3() {
  const auto k2 = dense_spectrum(from_edges(2, {{0, 1}}));
  const auto p3 = dense_spectrum(from_edges(3, {{0, 1}, {1, 2}}));
  const auto k4 = dense_spectrum(from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  const bool hand = std::fabs(k2[0]) < 1e-10 && std::fabs(k2[1] - 2.0) < 1e-10 && std::fabs(p3[0]) < 1e-10 &&
                    std::fabs(p3[1] - 1.0) < 1e-10 && std::fabs(p3[2] - 2.0) < 1e-10 &&
                    std::fabs(k4[1] - 4.0 / 3.0) < 1e-10;
  int compared = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; compared < 100 && seed < 2000; ++seed) {
    const double alpha = 0.55 + 0.1 * static_cast<double>(seed % 5);
    const auto g = build_graph(sample_points(ModelParams::make(alpha, 0.0, 400, SamplingMode::uniform, seed)));
    for (const auto& h : connected_components(g)) {
      if (h.size() < 3 || h.size() > 256) continue;
      worst = std::max(worst, std::fabs(spectral_gap(h).lambda1 - dense_spectrum(h)[1]));
      ++compared;
      break;
    }
  }
  return {hand && compared == 100 && worst <= 1e-6,
          std::string("hand spectra ") + (hand ? "ok" : "wrong") + ", " + std::to_string(compared) +
              " components, max |iterative - dense| = " + fmt("%.2e", worst)};
}

Outcome ac4() {
  std::size_t checked = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 400, SamplingMode::uniform, seed)));
    for (const auto& h : connected_components(g)) {
      if (h.size() < 2 || h.size() > 12) continue;
      const auto c = cheeger_check(h);
      violations += !c.holds;
      ++checked;
    }
  }
  std::size_t half_violations = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 10000, SamplingMode::uniform, seed)));
    const auto h = center_component(g);
    half_violations += spectral_gap(h).lambda1 > 2.0 * half_disk_conductance(h).conductance;
  }
  return {checked > 0 && violations == 0 && half_violations == 0,
          std::to_string(checked) + " small components, " + std::to_string(violations) +
              " sandwich violations; n=1e4 half-disk violations " + std::to_string(half_violations) + "/10"};
}

SweepConfig sweep(std::vector<double> alphas, std::vector<std::uint64_t> sizes, int seeds,
                  std::vector<std::string> measurements) {
  SweepConfig c;
  c.alphas = std::move(alphas);
  c.sizes = std::move(sizes);
  c.seeds = seeds;
  c.measurements = std::move(measurements);
  return c;
}

Outcome ac5() {
  const auto t0 = Clock::now();
  const auto rows = run_sweep(sweep({0.75}, powers_of_two(10, 14), 10, {"gap"}));
  FitRequest req;
  req.measurement = "gap";
  const auto fit = fit_exponent(rows, req);
  const double t = seconds_since(t0);
  return {failed_rows(rows) == 0 && fit.exponent >= -0.75 && fit.exponent <= -0.30 && t < 1800.0,
          "lambda1 exponent " + fmt("%.3f", fit.exponent) + " (band [-0.75, -0.30]), " + fmt("%.1f s", t)};
}

Outcome ac6() {
  const auto rows = run_sweep(sweep({0.65, 0.75}, powers_of_two(13, 17), 20, {"halfdisk"}));
  bool pass = failed_rows(rows) == 0;
  std::string detail;
  for (double alpha : {0.65, 0.75}) {
    FitRequest req;
    req.measurement = "halfdisk";
    req.alpha = alpha;
    req.correction_power = 1.0;
    const auto fit = fit_exponent(rows, req);
    const double target = 2.0 * (1.0 - alpha);
    pass = pass && std::fabs(fit.exponent - target) <= 0.15;
    detail += "alpha " + fmt("%.2f", alpha) + ": " + fmt("%.3f", fit.exponent) + " vs " + fmt("%.2f", target) + "; ";
  }
  return {pass, detail + "tolerance 0.15"};
}

// Elongated flow per edge from explicit per-pair path enumeration.
double enumeration_mismatch(const ComponentView& h, const FlowCertificate& cert) {
  std::map<Edge, double> oracle;
  for (VertexId s = 0; s < h.size(); ++s) {
    for (VertexId t = s + 1; t < h.size(); ++t) {
      for (const auto& p : pair_route(h, cert.levels, s, t).paths) {
        const double length = static_cast<double>(p.vertices.size() - 1);
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
          oracle[{std::min(p.vertices[i], p.vertices[i + 1]), std::max(p.vertices[i], p.vertices[i + 1])}] +=
              p.flow * length;
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t e = 0; e < cert.edges.size(); ++e) {
    const auto it = oracle.find(cert.edges[e]);
    const double expected = it == oracle.end() ? 0.0 : it->second;
    if (expected == 0.0) {
      if (cert.edge_flow[e] != 0.0) worst = std::max(worst, 1.0);
      continue;
    }
    worst = std::max(worst, std::fabs(cert.edge_flow[e] - expected) / expected);
  }
  return worst;
}

Outcome ac7() {
  std::size_t certified = 0, unsound = 0, unchecked = 0;
  double worst_demand = 0.0, worst_ratio = 0.0;
  for (double alpha : {0.6, 0.75}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto g = build_graph(sample_points(ModelParams::make(alpha, 0.0, 1500, SamplingMode::uniform, seed)));
      const auto h = center_component(g);
      if (h.size() < 2) continue;
      FlowOptions opts;
      opts.sample_pairs = 1000;
      opts.seed = seed;
      const auto cert = build_flow(h, opts);
      worst_demand = std::max(worst_demand, cert.demand_error);
      if (!cert.demand_checked) {
        ++unchecked;
        continue;
      }
      const double lambda1 = spectral_gap(h).lambda1;
      worst_ratio = std::max(worst_ratio, sinclair_bound(cert) / lambda1);
      unsound += sinclair_bound(cert) > lambda1 * (1.0 + 1e-6);
      ++certified;
    }
  }
  std::size_t enumerated = 0;
  double worst_enum = 0.0;
  for (std::uint64_t seed = 0; enumerated < 10 && seed < 200; ++seed) {
    const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 250, SamplingMode::uniform, seed)));
    const auto h = center_component(g);
    if (h.size() < 10 || h.size() > 200) continue;
    for (std::optional<double> nu : {std::optional<double>{}, std::optional<double>{-2.0}}) {
      FlowOptions opts;
      opts.nu_prime = nu;
      worst_enum = std::max(worst_enum, enumeration_mismatch(h, build_flow(h, opts)));
    }
    ++enumerated;
  }
  return {certified == 60 && unsound == 0 && unchecked == 0 && worst_demand <= 1e-9 && enumerated == 10 &&
              worst_enum <= 1e-12,
          std::to_string(certified) + " certified, " + std::to_string(unsound) + " unsound, max (1/rho)/lambda1 " +
              fmt("%.3g", worst_ratio) + ", demand error " + fmt("%.1e", worst_demand) +
              ", aggregation vs enumeration " + fmt("%.1e", worst_enum) + " on " + std::to_string(enumerated) +
              " components"};
}

Outcome ac8() {
  auto config = sweep({0.75}, powers_of_two(10, 13), 5, {"certificate"});
  config.exact_cap = 10000;
  const auto rows = run_sweep(config);
  FitRequest req;
  req.measurement = "certificate";
  const auto fit = fit_exponent(rows, req);
  const double threshold = -(2.0 * 0.75 - 1.0) - 0.3;
  return {failed_rows(rows) == 0 && fit.exponent >= threshold,
          "certificate exponent " + fmt("%.3f", fit.exponent) + " (threshold " + fmt("%.2f", threshold) + ")"};
}

Outcome ac9() {
  auto config = sweep({0.75}, powers_of_two(12, 16), 10, {"probes"});
  config.eps = 0.5;
  const auto rows = run_sweep(config);
  FitRequest req;
  req.measurement = "probes";
  const auto fit = fit_exponent(rows, req);
  const double threshold = -(2.0 * 0.75 - 1.0) * 0.5 - 0.2;
  Outcome out{failed_rows(rows) == 0 && fit.exponent >= threshold,
              "probe minimum exponent " + fmt("%.3f", fit.exponent) + " (threshold " + fmt("%.2f", threshold) +
                  ")"};
  // The 1/cap floor alone has slope -eps; pendant sets near the cap reach it.
  out.known = !out.pass && failed_rows(rows) == 0;
  return out;
}

Outcome ac10() {
  const auto rows = run_sweep(sweep({0.75}, powers_of_two(10, 14), 10, {"bisection"}));
  FitRequest req;
  req.measurement = "bisection";
  const auto fit = fit_exponent(rows, req);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : rows) {
    const double ratio = r.aux / static_cast<double>(r.k);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const auto cuts = run_sweep(sweep({0.75}, {10000}, 20, {"mincut"}));
  const auto leaves = std::count_if(cuts.begin(), cuts.end(), [](const SweepRow& r) { return r.value == 1.0; });
  const bool exponent_ok = std::fabs(fit.exponent - 0.5) <= 0.2;
  const bool band_ok = lo >= 0.05 && hi <= 2.0;
  const bool leaf_ok = static_cast<double>(leaves) >= 0.95 * static_cast<double>(cuts.size());
  const bool clean = failed_rows(rows) == 0 && failed_rows(cuts) == 0;
  Outcome out{clean && exponent_ok && band_ok && leaf_ok,
              "min-bisection exponent " + fmt("%.3f", fit.exponent) + " (0.50 +- 0.20); max-bisection/|U| in [" +
                  fmt("%.2f", lo) + ", " + fmt("%.2f", hi) + "] (band [0.05, 2]); mc = 1 on " +
                  std::to_string(leaves) + "/" + std::to_string(cuts.size())};
  // A valid bisection is a lower bound on the maximum, so a ratio above 2 cannot be heuristic slack.
  out.known = clean && exponent_ok && leaf_ok && lo >= 0.05 && !band_ok;
  return out;
}

Outcome ac11() {
  auto config = sweep({0.55}, {740}, 200, {"giant"});
  config.C = 2.25;
  const auto rows = run_sweep(config);
  std::vector<double> fractions;
  for (const auto& r : rows) fractions.push_back(r.value);
  const double m = median(fractions);
  return {failed_rows(rows) == 0 && m >= 0.6 && m <= 0.95,
          "median giant fraction " + fmt("%.3f", m) + " over " + std::to_string(rows.size()) + " seeds"};
}

Outcome ac12() {
  const auto t0 = Clock::now();
  const auto g = build_graph(sample_points(ModelParams::make(0.75, 0.0, 1000000, SamplingMode::uniform, 1)));
  const double t = seconds_since(t0);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double gib = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
  return {t < 60.0 && gib < 4.0,
          std::to_string(g->edge_count()) + " edges in " + fmt("%.1f s", t) + ", peak RSS " + fmt("%.2f GiB", gib)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},  {"AC-5", ac5},   {"AC-6", ac6},
      {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}, {"AC-10", ac10}, {"AC-11", ac11}, {"AC-12", ac12}};
  int unexpected = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const char* verdict = o.pass ? "PASS" : (o.known ? "FAIL (known deviation)" : "FAIL");
    std::printf("%-5s %s  %s  [%.1f s]\n", name, verdict, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    unexpected += !o.pass && !o.known;
  }
  return unexpected == 0 ? 0 : 1;
}
