#include "hrg/conductance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "hrg/error.hpp"
#include "hrg/rng.hpp"
#include "hrg/sampler.hpp"

namespace hrg {

namespace {

CutReport make_report(std::size_t size, std::uint64_t vol_set, std::uint64_t vol_total, std::uint64_t boundary) {
  CutReport r;
  r.set_size = size;
  r.vol_set = vol_set;
  r.vol_complement = vol_total - vol_set;
  r.boundary = boundary;
  r.conductance = static_cast<double>(boundary) / static_cast<double>(std::min(r.vol_set, r.vol_complement));
  return r;
}

// Grows a vertex set one vertex at a time, tracking |dS| and vol(S).
class IncrementalCut {
 public:
  explicit IncrementalCut(const ComponentView& h) : h_(h), in_(h.size(), 0) {}

  void add(VertexId v) {
    std::uint32_t inside = 0;
    for (VertexId w : h_.neighbors(v)) inside += in_[w];
    boundary_ += h_.degree(v);
    boundary_ -= 2ull * inside;
    vol_ += h_.degree(v);
    in_[v] = 1;
    members_.push_back(v);
  }

  void clear() {
    for (VertexId v : members_) in_[v] = 0;
    members_.clear();
    boundary_ = 0;
    vol_ = 0;
  }

  bool proper() const { return !members_.empty() && members_.size() < h_.size(); }
  std::uint64_t vol() const { return vol_; }
  std::uint64_t boundary() const { return boundary_; }
  const std::vector<VertexId>& members() const { return members_; }
  CutReport report() const { return make_report(members_.size(), vol_, h_.vol(), boundary_); }

 private:
  const ComponentView& h_;
  std::vector<std::uint8_t> in_;
  std::vector<VertexId> members_;
  std::uint64_t boundary_ = 0;
  std::uint64_t vol_ = 0;
};

void require_bisectable(const ComponentView& h) {
  require(h.size() >= 2, ErrorCode::invalid_argument, "bisection needs at least 2 vertices");
}

std::vector<std::uint8_t> side_from_order(std::span<const VertexId> order, std::size_t first_count, std::size_t k) {
  std::vector<std::uint8_t> side(k, 0);
  for (std::size_t i = 0; i < first_count; ++i) side[order[i]] = 1;
  return side;
}

// Pairwise swaps between the sides; keeps the balance. Returns move evaluations spent.
std::uint64_t refine_by_swaps(const ComponentView& h, std::vector<std::uint8_t>& side, bool maximize,
                              std::uint64_t cap) {
  const std::size_t k = h.size();
  std::vector<std::int64_t> same(k, 0);
  for (VertexId v = 0; v < k; ++v) {
    for (VertexId w : h.neighbors(v)) same[v] += side[w] == side[v];
  }
  // gain(v): reduction of the objective when v changes side alone.
  auto gain = [&](VertexId v) {
    const std::int64_t ext = static_cast<std::int64_t>(h.degree(v)) - same[v];
    return maximize ? same[v] - ext : ext - same[v];
  };
  auto flip = [&](VertexId v) {
    for (VertexId w : h.neighbors(v)) same[w] += side[w] == side[v] ? -1 : 1;
    side[v] ^= 1u;
    same[v] = static_cast<std::int64_t>(h.degree(v)) - same[v];
  };

  constexpr std::size_t kTop = 4;
  std::uint64_t evaluations = 0;
  while (evaluations < cap) {
    std::vector<std::pair<std::int64_t, VertexId>> best[2];
    for (VertexId v = 0; v < k; ++v) {
      auto& list = best[side[v]];
      const std::pair<std::int64_t, VertexId> entry{gain(v), v};
      if (list.size() < kTop) {
        list.push_back(entry);
        std::sort(list.begin(), list.end(), std::greater<>());
      } else if (entry > list.back()) {
        list.back() = entry;
        std::sort(list.begin(), list.end(), std::greater<>());
      }
    }
    std::int64_t best_delta = 0;
    VertexId pick_a = 0, pick_b = 0;
    for (const auto& [ga, a] : best[0]) {
      for (const auto& [gb, b] : best[1]) {
        ++evaluations;
        const std::int64_t adjacent = h.has_edge(a, b) ? 1 : 0;
        const std::int64_t delta = ga + gb + (maximize ? 2 * adjacent : -2 * adjacent);
        if (delta > best_delta) {
          best_delta = delta;
          pick_a = a;
          pick_b = b;
        }
      }
    }
    if (best_delta <= 0) break;
    flip(pick_a);
    flip(pick_b);
  }
  return evaluations;
}

BisectionResult finish_bisection(const ComponentView& h, std::vector<std::uint8_t> side, std::string method,
                                 std::uint64_t evaluations, std::uint64_t cap) {
  BisectionResult r;
  r.size_first = static_cast<std::size_t>(std::count(side.begin(), side.end(), 1));
  r.size_second = h.size() - r.size_first;
  r.crossing = crossing_edges(h, side);
  r.side = std::move(side);
  r.method = std::move(method);
  r.move_evaluations = evaluations;
  r.move_cap = cap;
  return r;
}

std::vector<VertexId> angular_order(const ComponentView& h) {
  std::vector<VertexId> order(h.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    const double ta = h.point(a).theta, tb = h.point(b).theta;
    return ta < tb || (ta == tb && a < b);
  });
  return order;
}

// Best rotation of a contiguous angular window holding floor(k/2) vertices.
std::vector<std::uint8_t> angular_sweep(const ComponentView& h) {
  const std::size_t k = h.size();
  const std::size_t half = k / 2;
  const auto order = angular_order(h);
  std::vector<std::uint8_t> side = side_from_order(order, half, k);
  std::int64_t crossing = static_cast<std::int64_t>(crossing_edges(h, side));
  std::int64_t best = crossing;
  std::size_t best_start = 0;
  auto inside = [&](VertexId v) {
    std::int64_t c = 0;
    for (VertexId w : h.neighbors(v)) c += side[w];
    return c;
  };
  for (std::size_t s = 0; s + 1 < k; ++s) {
    const VertexId out = order[s];
    const VertexId in = order[(s + half) % k];
    side[out] = 0;
    crossing += 2 * inside(out) - static_cast<std::int64_t>(h.degree(out));
    crossing += static_cast<std::int64_t>(h.degree(in)) - 2 * inside(in);
    side[in] = 1;
    if (crossing < best) {
      best = crossing;
      best_start = s + 1;
    }
  }
  std::vector<std::uint8_t> result(k, 0);
  for (std::size_t i = 0; i < half; ++i) result[order[(best_start + i) % k]] = 1;
  return result;
}

std::uint64_t stoer_wagner(const ComponentView& h) {
  const std::size_t k = h.size();
  std::vector<std::vector<std::int64_t>> w(k, std::vector<std::int64_t>(k, 0));
  for (VertexId u = 0; u < k; ++u)
    for (VertexId v : h.neighbors(u)) w[u][v] = 1;
  std::vector<std::size_t> alive(k);
  std::iota(alive.begin(), alive.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  while (alive.size() > 1) {
    const std::size_t count = alive.size();
    std::vector<std::int64_t> key(count, 0);
    std::vector<std::uint8_t> added(count, 0);
    std::size_t prev = 0, last = 0;
    for (std::size_t step = 0; step < count; ++step) {
      std::size_t pick = count;
      for (std::size_t i = 0; i < count; ++i)
        if (!added[i] && (pick == count || key[i] > key[pick])) pick = i;
      added[pick] = 1;
      prev = last;
      last = pick;
      if (step + 1 == count) best = std::min(best, key[pick]);
      for (std::size_t i = 0; i < count; ++i)
        if (!added[i]) key[i] += w[alive[pick]][alive[i]];
    }
    const std::size_t s = alive[prev], t = alive[last];
    for (std::size_t i = 0; i < k; ++i) {
      w[s][i] += w[t][i];
      w[i][s] = w[s][i];
    }
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(last));
  }
  return static_cast<std::uint64_t>(best);
}

}  // namespace

CutReport cut_report_from_membership(const ComponentView& h, std::span<const std::uint8_t> in_set) {
  require(in_set.size() == h.size(), ErrorCode::invalid_argument, "membership vector has the wrong length");
  std::size_t size = 0;
  std::uint64_t vol = 0, boundary = 0;
  for (VertexId v = 0; v < h.size(); ++v) {
    if (!in_set[v]) continue;
    ++size;
    vol += h.degree(v);
    for (VertexId w : h.neighbors(v)) boundary += in_set[w] ? 0 : 1;
  }
  if (size == 0 || size == h.size()) fail(ErrorCode::domain, "cut_report needs a nonempty proper subset");
  return make_report(size, vol, h.vol(), boundary);
}

CutReport cut_report(const ComponentView& h, std::span<const VertexId> set) {
  std::vector<std::uint8_t> in(h.size(), 0);
  for (VertexId v : set) {
    require(v < h.size(), ErrorCode::invalid_argument, "vertex id out of range");
    require(in[v] == 0, ErrorCode::invalid_argument, "duplicate vertex in set");
    in[v] = 1;
  }
  return cut_report_from_membership(h, in);
}

CutReport half_disk_conductance(const ComponentView& h, double reference_angle) {
  const Region half = Region::half_disk(reference_angle);
  std::vector<std::uint8_t> in(h.size(), 0);
  for (VertexId v = 0; v < h.size(); ++v) in[v] = half.contains(h.point(v)) ? 1 : 0;
  return cut_report_from_membership(h, in);
}

ExhaustiveConductance brute_force_conductance(const ComponentView& h) {
  const std::size_t k = h.size();
  if (k > brute_force_limit) {
    fail(ErrorCode::guard_exceeded, "brute_force_conductance refuses k = " + std::to_string(k) + " (limit 20)");
  }
  require(k >= 2, ErrorCode::invalid_argument, "conductance needs at least 2 vertices");
  std::vector<std::uint32_t> mask(k, 0);
  for (VertexId v = 0; v < k; ++v)
    for (VertexId w : h.neighbors(v)) mask[v] |= 1u << w;

  // Vertex k-1 stays outside S; walk the remaining subsets in Gray-code order.
  const std::uint32_t limit = 1u << (k - 1);
  std::uint32_t set = 0;
  std::int64_t boundary = 0, vol = 0;
  ExhaustiveConductance best;
  best.conductance = std::numeric_limits<double>::infinity();
  std::uint32_t best_set = 0;
  for (std::uint32_t i = 1; i < limit; ++i) {
    const int v = std::countr_zero(i);
    const std::int64_t inside = std::popcount(mask[v] & set);
    const std::int64_t deg = h.degree(static_cast<VertexId>(v));
    if (set & (1u << v)) {
      set &= ~(1u << v);
      boundary += 2 * inside - deg;
      vol -= deg;
    } else {
      boundary += deg - 2 * inside;
      set |= 1u << v;
      vol += deg;
    }
    const auto total = static_cast<std::int64_t>(h.vol());
    const double value = static_cast<double>(boundary) / static_cast<double>(std::min(vol, total - vol));
    if (value < best.conductance) {
      best.conductance = value;
      best_set = set;
    }
  }
  for (VertexId v = 0; v < k; ++v)
    if (best_set & (1u << v)) best.argmin.push_back(v);
  best.report = cut_report(h, best.argmin);
  best.conductance = best.report.conductance;
  return best;
}

CheegerReport cheeger_check(const ComponentView& h) {
  const auto exhaustive = brute_force_conductance(h);
  const auto spectrum = dense_spectrum(h);
  CheegerReport r;
  r.exact = true;
  r.lambda1 = spectrum.at(1);
  r.conductance = exhaustive.conductance;
  r.lower = 0.5 * r.conductance * r.conductance;
  r.upper = 2.0 * r.conductance;
  r.holds = r.lower <= r.lambda1 + cheeger_slack && r.lambda1 <= r.upper + cheeger_slack;
  return r;
}

CheegerReport cheeger_check(double lambda1, double conductance_upper) {
  CheegerReport r;
  r.exact = false;
  r.lambda1 = lambda1;
  r.conductance = conductance_upper;
  r.lower = 0.0;
  r.upper = 2.0 * conductance_upper;
  r.holds = lambda1 <= r.upper + cheeger_slack;
  return r;
}

const char* probe_family_name(unsigned family) {
  switch (family) {
    case probe_truncated_sectors: return "truncated_sector";
    case probe_bfs_balls: return "bfs_ball";
    case probe_band_sectors: return "band_sector";
    default: return "none";
  }
}

ProbeResult probe_small_sets(const ComponentView& h, double eps, const ProbeOptions& options) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "eps must lie in (0, 1)");
  require(h.size() >= 2, ErrorCode::invalid_argument, "probing needs at least 2 vertices");
  const std::size_t k = h.size();
  ProbeResult result;
  result.volume_cap = std::pow(static_cast<double>(h.parent().vertex_count()), eps);
  result.best.conductance = std::numeric_limits<double>::infinity();

  IncrementalCut cut(h);
  auto consider = [&](unsigned family) {
    if (!cut.proper() || static_cast<double>(cut.vol()) > result.volume_cap) return;
    ++result.evaluated;
    const CutReport report = cut.report();
    if (report.conductance < result.best.conductance) {
      result.empty = false;
      result.best = report;
      result.witness_family = family;
      result.witness = cut.members();
    }
  };

  // Dyadic sectors [j w, (j+1) w), w = 2pi / 2^level, down to about one vertex per sector.
  int top_level = 1;
  while ((std::size_t{1} << top_level) < 4 * k && top_level < 30) ++top_level;
  auto sector_of = [](double theta, int level) {
    const auto count = std::uint64_t{1} << level;
    return std::min<std::uint64_t>(count - 1, static_cast<std::uint64_t>(theta / kTwoPi * static_cast<double>(count)));
  };

  if (options.families & probe_truncated_sectors) {
    std::vector<VertexId> by_radius(k);
    std::iota(by_radius.begin(), by_radius.end(), 0);
    std::sort(by_radius.begin(), by_radius.end(), [&](VertexId a, VertexId b) {
      return h.point(a).r > h.point(b).r || (h.point(a).r == h.point(b).r && a < b);
    });
    const int top_radius = static_cast<int>(std::ceil(h.parent().radius()));
    for (int level = 0; level <= top_level; ++level) {
      std::vector<std::vector<VertexId>> sectors(std::size_t{1} << level);
      for (VertexId v : by_radius) sectors[sector_of(h.point(v).theta, level)].push_back(v);
      for (const auto& members : sectors) {
        // S = sector minus B_O(rho) for rho = top_radius, ..., 0.
        std::size_t next = 0;
        for (int rho = top_radius; rho >= 0 && static_cast<double>(cut.vol()) <= result.volume_cap; --rho) {
          const std::size_t before = cut.members().size();
          while (next < members.size() && h.point(members[next]).r > rho) cut.add(members[next++]);
          if (cut.members().size() != before) consider(probe_truncated_sectors);
        }
        cut.clear();
      }
    }
  }

  if (options.families & probe_bfs_balls) {
    Rng rng(options.seed);
    std::vector<std::uint8_t> seen(k, 0);
    std::vector<VertexId> queue;
    for (int i = 0; i < options.bfs_starts; ++i) {
      const auto start = static_cast<VertexId>(rng.below(k));
      queue.assign(1, start);
      seen[start] = 1;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId u = queue[head];
        cut.add(u);
        if (static_cast<double>(cut.vol()) > result.volume_cap) break;
        consider(probe_bfs_balls);
        for (VertexId w : h.neighbors(u)) {
          if (!seen[w]) {
            seen[w] = 1;
            queue.push_back(w);
          }
        }
      }
      for (VertexId v : queue) seen[v] = 0;
      cut.clear();
    }
  }

  if (options.families & probe_band_sectors) {
    std::vector<std::vector<VertexId>> bands;
    for (VertexId v = 0; v < k; ++v) {
      const auto ell = static_cast<std::size_t>(band_of(h.point(v).r));
      if (bands.size() <= ell) bands.resize(ell + 1);
      bands[ell].push_back(v);
    }
    for (auto& members : bands) {
      if (members.empty()) continue;
      std::sort(members.begin(), members.end(), [&](VertexId a, VertexId b) {
        return h.point(a).theta < h.point(b).theta || (h.point(a).theta == h.point(b).theta && a < b);
      });
      for (int level = 0; level <= top_level; ++level) {
        std::size_t i = 0;
        while (i < members.size()) {
          const auto sector = sector_of(h.point(members[i]).theta, level);
          std::size_t j = i;
          while (j < members.size() && sector_of(h.point(members[j]).theta, level) == sector) {
            cut.add(members[j++]);
            if (static_cast<double>(cut.vol()) > result.volume_cap) break;
          }
          consider(probe_band_sectors);
          cut.clear();
          while (j < members.size() && sector_of(h.point(members[j]).theta, level) == sector) ++j;
          i = j;
        }
      }
    }
  }
  return result;
}

std::uint64_t crossing_edges(const ComponentView& h, std::span<const std::uint8_t> side) {
  std::uint64_t crossing = 0;
  for (VertexId u = 0; u < h.size(); ++u)
    for (VertexId w : h.neighbors(u))
      if (u < w && side[u] != side[w]) ++crossing;
  return crossing;
}

BisectionResult min_bisection_heuristic(const ComponentView& h, const BisectionOptions& options) {
  require_bisectable(h);
  const std::size_t k = h.size();
  const std::uint64_t cap = options.cap_factor * k;

  auto sweep = angular_sweep(h);
  const std::uint64_t used_sweep = refine_by_swaps(h, sweep, false, cap / 2);
  BisectionResult best = finish_bisection(h, std::move(sweep), "angular_sweep+swaps", used_sweep, cap);

  SpectralResult owned;
  const SpectralResult* spectral = options.spectral;
  if (spectral == nullptr) {
    owned = spectral_gap(h);
    spectral = &owned;
  }
  std::vector<VertexId> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(k);
  for (VertexId v = 0; v < k; ++v) key[v] = spectral->eigenvector[v] / std::sqrt(static_cast<double>(h.degree(v)));
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return key[a] < key[b] || (key[a] == key[b] && a < b); });
  auto median = side_from_order(order, k / 2, k);
  const std::uint64_t used_spectral = refine_by_swaps(h, median, false, cap - used_sweep);
  auto candidate = finish_bisection(h, std::move(median), "spectral_median+swaps", used_spectral, cap);
  const std::uint64_t total = used_sweep + used_spectral;
  if (candidate.crossing < best.crossing) best = std::move(candidate);
  best.move_evaluations = total;
  return best;
}

BisectionResult max_bisection_heuristic(const ComponentView& h, const BisectionOptions& options) {
  require_bisectable(h);
  const std::size_t k = h.size();
  const std::uint64_t cap = options.cap_factor * k;
  std::vector<VertexId> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    return h.point(a).r < h.point(b).r || (h.point(a).r == h.point(b).r && a < b);
  });
  auto side = side_from_order(order, k / 2, k);
  const std::uint64_t used = refine_by_swaps(h, side, true, cap);
  return finish_bisection(h, std::move(side), "radial_median+swaps", used, cap);
}

CutPair min_cut_and_max_cut(const ComponentView& h, const BisectionOptions& options) {
  require_bisectable(h);
  const std::size_t k = h.size();
  CutPair out;
  std::uint32_t min_degree = std::numeric_limits<std::uint32_t>::max();
  for (VertexId v = 0; v < k; ++v) min_degree = std::min(min_degree, h.degree(v));
  if (min_degree == 1) {
    out.min_cut = 1;
    out.min_cut_method = "leaf";
  } else if (k <= exact_min_cut_limit) {
    out.min_cut = stoer_wagner(h);
    out.min_cut_method = "stoer_wagner";
  } else {
    out.min_cut = min_degree;
    out.min_cut_method = "min_degree_upper_bound";
  }

  BisectionResult bisection = max_bisection_heuristic(h, options);
  out.max_bisection = bisection.crossing;
  std::vector<std::uint8_t> side = std::move(bisection.side);
  std::int64_t cut = static_cast<std::int64_t>(bisection.crossing);
  const std::uint64_t cap = options.cap_factor * k;
  std::uint64_t evaluations = 0;
  bool improved = true;
  while (improved && evaluations < cap) {
    improved = false;
    for (VertexId v = 0; v < k && evaluations < cap; ++v) {
      ++evaluations;
      std::int64_t same = 0;
      for (VertexId w : h.neighbors(v)) same += side[w] == side[v];
      const std::int64_t gain = 2 * same - static_cast<std::int64_t>(h.degree(v));
      if (gain > 0) {
        side[v] ^= 1u;
        cut += gain;
        improved = true;
      }
    }
  }
  out.max_cut = static_cast<std::uint64_t>(cut);
  out.move_evaluations = evaluations;
  return out;
}

void write_cut_report_header(std::ostream& out) {
  out << "label,set_size,vol_set,vol_complement,boundary,conductance\n";
}

void write_cut_report_row(std::ostream& out, const std::string& label, const CutReport& r) {
  out << label << ',' << r.set_size << ',' << r.vol_set << ',' << r.vol_complement << ',' << r.boundary << ','
      << format_real(r.conductance) << '\n';
}

void write_bisection_header(std::ostream& out) {
  out << "label,size_first,size_second,crossing,method,move_evaluations,move_cap\n";
}

void write_bisection_row(std::ostream& out, const std::string& label, const BisectionResult& r) {
  out << label << ',' << r.size_first << ',' << r.size_second << ',' << r.crossing << ',' << r.method << ','
      << r.move_evaluations << ',' << r.move_cap << '\n';
}

}  // namespace hrg
