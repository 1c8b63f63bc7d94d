#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hrg/components.hpp"
#include "hrg/spectral.hpp"

namespace hrg {

/// |dS| and side volumes of a nontrivial vertex set S of a component, with
/// h(S) = |dS| / min(vol S, vol (U \ S)).
struct CutReport {
  std::size_t set_size = 0;
  std::uint64_t vol_set = 0;
  std::uint64_t vol_complement = 0;
  std::uint64_t boundary = 0;
  double conductance = 0.0;
};

// Local vertex ids; duplicates rejected. ErrorCode::domain unless {} != S != U.
CutReport cut_report(const ComponentView& h, std::span<const VertexId> set);
CutReport cut_report_from_membership(const ComponentView& h, std::span<const std::uint8_t> in_set);

// S = members in the pi-sector [reference, reference + pi).
CutReport half_disk_conductance(const ComponentView& h, double reference_angle = 0.0);

inline constexpr std::size_t brute_force_limit = 20;

struct ExhaustiveConductance {
  double conductance = 0.0;
  std::vector<VertexId> argmin;
  CutReport report;
};

// Exact h(H) over all 2^{k-1} - 1 splits; k <= 20.
ExhaustiveConductance brute_force_conductance(const ComponentView& h);

struct CheegerReport {
  double lambda1 = 0.0;
  double conductance = 0.0;  // exact h(H), or an upper bound when !exact
  double lower = 0.0;        // h^2 / 2
  double upper = 0.0;        // 2 h
  bool exact = false;
  bool holds = false;
};

// Comparisons allow 1e-9 absolute slack for eigenvalue rounding.
inline constexpr double cheeger_slack = 1e-9;

// Full sandwich h^2/2 <= lambda1 <= 2h with exact h and dense lambda1 (k <= 20).
CheegerReport cheeger_check(const ComponentView& h);
// One-sided lambda1 <= 2 h_upper, the only direction an upper bound on h supports.
CheegerReport cheeger_check(double lambda1, double conductance_upper);

enum ProbeFamily : unsigned {
  probe_truncated_sectors = 1u,
  probe_bfs_balls = 2u,
  probe_band_sectors = 4u,
  probe_all = 7u,
};

const char* probe_family_name(unsigned family);

struct ProbeOptions {
  unsigned families = probe_all;
  int bfs_starts = 64;
  std::uint64_t seed = 0;
};

struct ProbeResult {
  bool empty = true;  // no candidate fit the volume cap
  double volume_cap = 0.0;
  CutReport best;
  unsigned witness_family = 0;
  std::vector<VertexId> witness;
  std::uint64_t evaluated = 0;
};

/// Minimum h(S) over structured sets with vol(S) <= n^eps (n = parent vertex count):
/// truncated dyadic sectors at every integer truncation radius, BFS balls grown
/// vertex by vertex, and single bands cut to dyadic sectors.
ProbeResult probe_small_sets(const ComponentView& h, double eps, const ProbeOptions& options = {});

struct BisectionOptions {
  std::uint64_t seed = 0;
  std::uint64_t cap_factor = 50;                   // move evaluations per vertex
  const SpectralResult* spectral = nullptr;        // reused instead of recomputed when given
};

struct BisectionResult {
  std::vector<std::uint8_t> side;  // 1 = first part
  std::size_t size_first = 0;
  std::size_t size_second = 0;
  std::uint64_t crossing = 0;
  std::string method;
  std::uint64_t move_evaluations = 0;
  std::uint64_t move_cap = 0;
};

std::uint64_t crossing_edges(const ComponentView& h, std::span<const std::uint8_t> side);

// Upper bound on the minimum bisection: best of an angular sweep and a spectral
// median split, each refined by boundary swaps.
BisectionResult min_bisection_heuristic(const ComponentView& h, const BisectionOptions& options = {});

// Lower bound on the maximum bisection: radial median split refined by swaps.
BisectionResult max_bisection_heuristic(const ComponentView& h, const BisectionOptions& options = {});

inline constexpr std::size_t exact_min_cut_limit = 400;

struct CutPair {
  std::uint64_t min_cut = 0;
  std::string min_cut_method;  // leaf | stoer_wagner | min_degree_upper_bound
  std::uint64_t max_cut = 0;   // local-search lower bound
  std::uint64_t max_bisection = 0;
  std::uint64_t move_evaluations = 0;
};

CutPair min_cut_and_max_cut(const ComponentView& h, const BisectionOptions& options = {});

// CSV, columns: label,set_size,vol_set,vol_complement,boundary,conductance
void write_cut_report_header(std::ostream& out);
void write_cut_report_row(std::ostream& out, const std::string& label, const CutReport& report);
// CSV, columns: label,size_first,size_second,crossing,method,move_evaluations,move_cap
void write_bisection_header(std::ostream& out);
void write_bisection_row(std::ostream& out, const std::string& label, const BisectionResult& result);

}  // namespace hrg
