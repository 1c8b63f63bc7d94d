#include "hrg/flowcert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "hrg/error.hpp"
#include "hrg/rng.hpp"
#include "hrg/sampler.hpp"

namespace hrg {

namespace {

constexpr VertexId kNone = std::numeric_limits<VertexId>::max();

struct BfsTree {
  std::vector<std::uint32_t> dist;
  std::vector<VertexId> parent;
  std::vector<VertexId> order;
};

// Sorted rows make the tree, and therefore every fallback path, deterministic.
BfsTree bfs_tree(const ComponentView& h, VertexId source) {
  BfsTree t;
  t.dist.assign(h.size(), std::numeric_limits<std::uint32_t>::max());
  t.parent.assign(h.size(), kNone);
  t.order.reserve(h.size());
  t.order.push_back(source);
  t.dist[source] = 0;
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const VertexId u = t.order[head];
    for (VertexId w : h.neighbors(u)) {
      if (t.dist[w] == std::numeric_limits<std::uint32_t>::max()) {
        t.dist[w] = t.dist[u] + 1;
        t.parent[w] = u;
        t.order.push_back(w);
      }
    }
  }
  return t;
}

std::vector<VertexId> tree_path(const BfsTree& tree, VertexId target) {
  std::vector<VertexId> path;
  for (VertexId v = target; v != kNone; v = tree.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Canonical shortest path: BFS rooted at the smaller endpoint, oriented s -> t.
std::vector<VertexId> fallback_path(const ComponentView& h, VertexId s, VertexId t) {
  const VertexId root = std::min(s, t);
  auto path = tree_path(bfs_tree(h, root), std::max(s, t));
  if (root != s) std::reverse(path.begin(), path.end());
  return path;
}

class FlowContext {
 public:
  FlowContext(const ComponentView& h, const Levels& levels) : h_(h), levels_(levels) {
    const std::size_t k = h.size();
    band_.resize(k);
    tilde_.assign(k, std::numeric_limits<int>::min());
    for (VertexId v = 0; v < k; ++v) {
      band_[v] = band_of(h.point(v).r);
      if (inner(v)) tilde_[v] = tilde_level(band_[v], levels);
      if (band_[v] == levels.ell_max + 1) ring_.push_back(v);
    }
    std::sort(ring_.begin(), ring_.end(), [&](VertexId a, VertexId b) {
      const double ta = h.point(a).theta, tb = h.point(b).theta;
      return ta < tb || (ta == tb && a < b);
    });
  }

  bool inner(VertexId v) const { return band_[v] <= levels_.ell_max; }
  int band(VertexId v) const { return band_[v]; }
  int tilde(VertexId v) const { return tilde_[v]; }
  bool in_m(VertexId b, VertexId w) const { return band_[w] == tilde_[b]; }  // w already in N(b)

  std::uint64_t count(VertexId s, VertexId t) const {
    std::vector<std::uint8_t> mark(h_.size(), 0);
    for (VertexId w : h_.neighbors(t))
      if (in_m(t, w) && w != s) mark[w] = 1;
    std::uint64_t c = 0;
    for (VertexId u : h_.neighbors(s)) {
      if (!in_m(s, u) || u == t) continue;
      for (VertexId w : h_.neighbors(u)) c += mark[w];
    }
    return c;
  }

  std::vector<std::array<VertexId, 4>> paths(VertexId s, VertexId t) const {
    std::vector<std::array<VertexId, 4>> out;
    for (VertexId u : h_.neighbors(s)) {
      if (!in_m(s, u) || u == t) continue;
      for (VertexId w : h_.neighbors(t)) {
        if (!in_m(t, w) || w == s || w == u) continue;
        if (h_.has_edge(u, w)) out.push_back({s, u, w, t});
      }
    }
    return out;
  }

  EndSegment end_segment(VertexId s) const {
    EndSegment seg;
    if (inner(s)) {
      seg.path = {s};
      return seg;
    }
    const BfsTree tree = bfs_tree(h_, s);
    VertexId ub = kNone;
    if (band_[s] == levels_.ell_max + 1) {
      ub = s;
    } else if (!ring_.empty()) {
      const double theta = h_.point(s).theta;
      auto it = std::upper_bound(ring_.begin(), ring_.end(), theta,
                                 [&](double t, VertexId v) { return t < h_.point(v).theta; });
      const std::size_t idx = static_cast<std::size_t>(it - ring_.begin());
      const VertexId u1 = ring_[idx % ring_.size()];
      const VertexId u0 = ring_[(idx + ring_.size() - 1) % ring_.size()];
      auto key = [&](VertexId u) {
        return std::make_tuple(tree.dist[u], angular_distance(theta, h_.point(u).theta), u);
      };
      ub = key(u0) <= key(u1) ? u0 : u1;
    }
    VertexId target = kNone;
    if (ub != kNone) {
      double best = std::numeric_limits<double>::infinity();
      for (VertexId w : h_.neighbors(ub)) {
        if (band_[w] != levels_.ell_max) continue;
        const double gap = angular_distance(h_.point(ub).theta, h_.point(w).theta);
        if (gap < best) {
          best = gap;
          target = w;
        }
      }
    }
    if (target != kNone) {
      seg.path = tree_path(tree, ub);
      seg.path.push_back(target);
    } else {
      seg.fallback = true;
      auto nearest = std::find_if(tree.order.begin(), tree.order.end(), [&](VertexId v) { return inner(v); });
      seg.path = nearest == tree.order.end() ? std::vector<VertexId>{s} : tree_path(tree, *nearest);
    }
    for (std::size_t i = 1; i + 1 < seg.path.size(); ++i) seg.inner_internal += inner(seg.path[i]) ? 1 : 0;
    return seg;
  }

  PairRoute route(VertexId s, VertexId t, double scale) const {
    PairRoute out;
    out.demand = scale * h_.degree(s) * static_cast<double>(h_.degree(t)) / static_cast<double>(h_.vol());
    const EndSegment ss = end_segment(s), st = end_segment(t);
    const VertexId a = ss.path.back(), b = st.path.back();
    if (inner(a) && inner(b) && a != b) {
      const auto middle = paths(a, b);
      if (!middle.empty()) {
        out.kind = inner(s) && inner(t) ? RouteKind::qprime : RouteKind::qsecond;
        const double share = out.demand / static_cast<double>(middle.size());
        for (const auto& q : middle) {
          RoutedPath p;
          p.vertices = ss.path;
          p.vertices.insert(p.vertices.end(), q.begin() + 1, q.end() - 1);
          p.vertices.insert(p.vertices.end(), st.path.rbegin(), st.path.rend());
          p.flow = share;
          out.paths.push_back(std::move(p));
        }
        return out;
      }
    }
    out.kind = RouteKind::fallback;
    out.paths.push_back({fallback_path(h_, s, t), out.demand});
    return out;
  }

 private:
  const ComponentView& h_;
  const Levels& levels_;
  std::vector<int> band_;
  std::vector<int> tilde_;
  std::vector<VertexId> ring_;  // P_{ell_max + 1} by angle
};

void require_pair(const ComponentView& h, VertexId s, VertexId t) {
  require(s < h.size() && t < h.size(), ErrorCode::invalid_argument, "vertex id out of range");
  require(s != t, ErrorCode::domain, "s and t must differ");
}

}  // namespace

Levels flow_levels(const ComponentView& h, std::optional<double> nu_prime) {
  const DiskModel disk = h.parent().params().disk();
  Slack slack = default_slack(disk);
  if (nu_prime) {
    slack.nu_prime = *nu_prime;
    return compute_levels(disk, slack);
  }
  const Levels standard = compute_levels(disk, slack);
  if (standard.ell_min < standard.ell_mid && standard.ell_mid < standard.ell_max) return standard;
  slack.nu_prime = 0.0;
  return compute_levels(disk, slack);
}

std::uint64_t qprime_path_count(const ComponentView& h, const Levels& levels, VertexId s, VertexId t) {
  require_pair(h, s, t);
  const FlowContext ctx(h, levels);
  require(ctx.inner(s) && ctx.inner(t), ErrorCode::domain, "qprime_path_count needs s, t in B_O(ell_max)");
  return ctx.count(s, t);
}

std::vector<std::array<VertexId, 4>> qprime_paths(const ComponentView& h, const Levels& levels, VertexId s,
                                                  VertexId t) {
  require_pair(h, s, t);
  const FlowContext ctx(h, levels);
  require(ctx.inner(s) && ctx.inner(t), ErrorCode::domain, "qprime_paths needs s, t in B_O(ell_max)");
  return ctx.paths(s, t);
}

EndSegment end_segment(const ComponentView& h, const Levels& levels, VertexId s) {
  require(s < h.size(), ErrorCode::invalid_argument, "vertex id out of range");
  return FlowContext(h, levels).end_segment(s);
}

const char* to_string(RouteKind kind) {
  switch (kind) {
    case RouteKind::qprime: return "qprime";
    case RouteKind::qsecond: return "qsecond";
    case RouteKind::fallback: return "fallback";
  }
  return "?";
}

PairRoute pair_route(const ComponentView& h, const Levels& levels, VertexId s, VertexId t, double demand_scale) {
  require_pair(h, s, t);
  return FlowContext(h, levels).route(s, t, demand_scale);
}

const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::core: return "core";
    case EdgeClass::spread_out: return "spread_out";
    case EdgeClass::belt: return "belt";
    case EdgeClass::belt_incident: return "belt_incident";
    case EdgeClass::middle: return "middle";
    case EdgeClass::remote: return "remote";
  }
  return "?";
}

EdgeClass classify_edge(int band_a, int band_b, const Levels& levels) {
  const int lo = std::min(band_a, band_b), hi = std::max(band_a, band_b);
  const int mid = levels.ell_mid, top = levels.ell_max;
  if (hi > top) return EdgeClass::remote;
  if (lo == mid && hi == mid) return EdgeClass::belt;
  const bool hi_middle = hi > mid && hi <= top;
  if (lo == mid && hi_middle) return EdgeClass::belt_incident;
  if (lo < mid && hi_middle) return EdgeClass::spread_out;
  if (lo > mid && hi_middle) return EdgeClass::middle;
  return EdgeClass::core;
}

FlowCertificate build_flow(const ComponentView& h, const FlowOptions& options) {
  const std::size_t k = h.size();
  require(k >= 2, ErrorCode::invalid_argument, "a flow needs at least 2 vertices");
  if (k > options.exact_cap) {
    fail(ErrorCode::guard_exceeded, "build_flow refuses k = " + std::to_string(k) + " (exact-mode cap " +
                                        std::to_string(options.exact_cap) + ")");
  }
  require(options.demand_scale > 0.0, ErrorCode::invalid_argument, "demand scale must be positive");

  FlowCertificate cert;
  cert.k = k;
  cert.levels = flow_levels(h, options.nu_prime);
  const Levels& L = cert.levels;
  const FlowContext ctx(h, L);
  const double vol = static_cast<double>(h.vol());
  const double scale = options.demand_scale;

  // Edge ids per CSR position.
  std::vector<std::uint64_t> offset(k + 1, 0);
  for (VertexId v = 0; v < k; ++v) offset[v + 1] = offset[v] + h.degree(v);
  std::vector<std::uint32_t> edge_at(offset[k]);
  for (VertexId u = 0; u < k; ++u) {
    const auto row = h.neighbors(u);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const VertexId w = row[i];
      if (u < w) {
        edge_at[offset[u] + i] = static_cast<std::uint32_t>(cert.edges.size());
        cert.edges.emplace_back(u, w);
      } else {
        const auto back = h.neighbors(w);
        const auto j = static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), u) - back.begin());
        edge_at[offset[u] + i] = edge_at[offset[w] + j];
      }
    }
  }
  auto edge_id = [&](VertexId u, VertexId w) {
    const auto row = h.neighbors(u);
    return edge_at[offset[u] + static_cast<std::size_t>(std::lower_bound(row.begin(), row.end(), w) - row.begin())];
  };
  std::vector<double> load(cert.edges.size(), 0.0);

  const auto diam = diameter(h, DiameterMode::exact);
  cert.diameter = diam.value;
  cert.path_cap = 2 * diam.value + 5;

  // End segments and anchors.
  std::vector<VertexId> anchor(k, kNone);
  std::vector<std::uint32_t> seglen(k, 0);
  std::vector<std::vector<std::uint32_t>> seg_edges(k);
  for (VertexId v = 0; v < k; ++v) {
    if (ctx.inner(v)) {
      anchor[v] = v;
      continue;
    }
    ++cert.outer_vertices;
    const EndSegment seg = ctx.end_segment(v);
    if (seg.fallback) ++cert.segment_fallbacks;
    if (seg.inner_internal <= 1) ++cert.structured_segments;
    const VertexId last = seg.path.back();
    if (!ctx.inner(last)) continue;
    anchor[v] = last;
    seglen[v] = static_cast<std::uint32_t>(seg.path.size() - 1);
    cert.max_segment_length = std::max(cert.max_segment_length, seglen[v]);
    for (std::size_t i = 0; i + 1 < seg.path.size(); ++i) seg_edges[v].push_back(edge_id(seg.path[i], seg.path[i + 1]));
  }

  std::vector<std::vector<VertexId>> group(k);
  std::vector<double> s0(k, 0.0), s1(k, 0.0);
  std::vector<std::uint32_t> group_len(k, 0);
  std::vector<VertexId> inner_list, unanchored;
  for (VertexId v = 0; v < k; ++v) {
    if (ctx.inner(v)) inner_list.push_back(v);
    if (anchor[v] == kNone) {
      unanchored.push_back(v);
      continue;
    }
    const VertexId a = anchor[v];
    group[a].push_back(v);
    s0[a] += h.degree(v);
    s1[a] += static_cast<double>(h.degree(v)) * seglen[v];
    group_len[a] = std::max(group_len[a], seglen[v]);
  }
  // M_v as CSR positions of v's row.
  std::vector<std::vector<std::uint32_t>> m_pos(k);
  for (VertexId v : inner_list) {
    const auto row = h.neighbors(v);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (ctx.in_m(v, row[i])) m_pos[v].push_back(static_cast<std::uint32_t>(i));
  }

  double routed = 0.0;
  std::vector<double> acc(k, 0.0);
  auto route_fallbacks = [&](VertexId s, const std::vector<VertexId>& targets) {
    if (targets.empty()) return;
    const BfsTree tree = bfs_tree(h, s);
    for (VertexId t : targets) {
      const double demand = scale * h.degree(s) * static_cast<double>(h.degree(t)) / vol;
      acc[t] += demand * tree.dist[t];
      routed += demand;
      cert.fallback_pairs += 2;
      cert.max_path_length = std::max(cert.max_path_length, tree.dist[t]);
    }
    for (std::size_t i = tree.order.size(); i-- > 1;) {
      const VertexId v = tree.order[i];
      if (acc[v] == 0.0) continue;
      load[edge_id(v, tree.parent[v])] += acc[v];
      acc[tree.parent[v]] += acc[v];
      acc[v] = 0.0;
    }
    acc[s] = 0.0;
  };

  std::vector<double> cnt(k, 0.0), y(k, 0.0), w_row(k, 0.0);
  std::vector<std::uint64_t> c_row(k, 0);
  std::vector<std::uint8_t> in_ma(k, 0);
  std::vector<VertexId> targets;
  for (VertexId a : inner_list) {
    const auto row_a = h.neighbors(a);
    for (std::uint32_t i : m_pos[a]) {
      const VertexId u = row_a[i];
      in_ma[u] = 1;
      for (VertexId w : h.neighbors(u))
        if (w != a) cnt[w] += 1.0;
    }
    double p0 = 0.0, p1 = 0.0;
    for (VertexId b : inner_list) {
      if (b == a) continue;
      const auto row_b = h.neighbors(b);
      double c = 0.0, size = 0.0;
      for (std::uint32_t i : m_pos[b]) {
        if (row_b[i] == a) continue;
        c += cnt[row_b[i]];
        size += 1.0;
      }
      c -= in_ma[b] * size;
      c_row[b] = static_cast<std::uint64_t>(c);
      if (c_row[b] == 0) continue;
      p0 += s0[b];
      p1 += s1[b];
      if (b < a) continue;
      const double weight = scale * (3.0 * s0[a] * s0[b] + s1[a] * s0[b] + s0[a] * s1[b]) / vol / c;
      w_row[b] = weight;
      for (std::uint32_t i : m_pos[b]) {
        const VertexId w = row_b[i];
        if (w == a) continue;
        y[w] += weight;
        load[edge_at[offset[b] + i]] += weight * (cnt[w] - in_ma[b]);
      }
      routed += scale * s0[a] * s0[b] / vol;
      const auto pairs = static_cast<std::uint64_t>(group[a].size() * group[b].size());
      cert.qprime_pairs += 2;
      cert.qsecond_pairs += 2 * (pairs - 1);
      cert.max_path_length = std::max(cert.max_path_length, group_len[a] + 3 + group_len[b]);
    }
    // Middle edges (u, w) and first edges (a, u).
    for (std::uint32_t i : m_pos[a]) {
      const VertexId u = row_a[i];
      const auto row_u = h.neighbors(u);
      const bool u_is_b = u > a && ctx.inner(u);
      double first = 0.0;
      for (std::size_t j = 0; j < row_u.size(); ++j) {
        const VertexId w = row_u[j];
        if (w == a) continue;
        double x = y[w];
        if (u_is_b && ctx.in_m(u, w)) x -= w_row[u];
        if (x == 0.0) continue;
        load[edge_at[offset[u] + j]] += x;
        first += x;
      }
      load[edge_at[offset[a] + i]] += first;
    }
    // End segments of every member routed through Q'.
    for (VertexId s : group[a]) {
      if (seglen[s] == 0) continue;
      const double coef = scale * h.degree(s) / vol * ((seglen[s] + 3.0) * p0 + p1);
      for (std::uint32_t e : seg_edges[s]) load[e] += coef;
    }
    for (VertexId s : group[a]) {
      targets.clear();
      for (VertexId t = s + 1; t < k; ++t) {
        const VertexId b = anchor[t];
        if (b == kNone || b == a || c_row[b] == 0) targets.push_back(t);
      }
      route_fallbacks(s, targets);
    }
    std::fill(cnt.begin(), cnt.end(), 0.0);
    std::fill(y.begin(), y.end(), 0.0);
    std::fill(w_row.begin(), w_row.end(), 0.0);
    std::fill(c_row.begin(), c_row.end(), 0);
    std::fill(in_ma.begin(), in_ma.end(), 0);
  }
  for (VertexId s : unanchored) {
    targets.clear();
    for (VertexId t = s + 1; t < k; ++t) targets.push_back(t);
    route_fallbacks(s, targets);
  }

  // Every ordered pair must be routed exactly once.
  double square_sum = 0.0;
  for (VertexId v = 0; v < k; ++v) square_sum += static_cast<double>(h.degree(v)) * h.degree(v);
  const double expected = scale * (vol * vol - square_sum) / (2.0 * vol);
  cert.demand_error = std::abs(routed - expected) / expected;
  const std::uint64_t ordered_pairs = static_cast<std::uint64_t>(k) * (k - 1);
  bool ok = cert.qprime_pairs + cert.qsecond_pairs + cert.fallback_pairs == ordered_pairs;

  // Re-route sampled pairs explicitly and check each commodity's total.
  Rng rng(options.seed);
  const std::size_t samples = std::min<std::size_t>(options.sample_pairs, ordered_pairs);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = static_cast<VertexId>(rng.below(k));
    auto t = static_cast<VertexId>(rng.below(k - 1));
    if (t >= s) ++t;
    const PairRoute r = ctx.route(s, t, scale);
    double total = 0.0;
    for (const auto& p : r.paths) {
      total += p.flow;
      ok = ok && p.vertices.front() == s && p.vertices.back() == t && p.vertices.size() - 1 <= cert.path_cap;
      for (std::size_t j = 0; j + 1 < p.vertices.size(); ++j) ok = ok && h.has_edge(p.vertices[j], p.vertices[j + 1]);
    }
    cert.demand_error = std::max(cert.demand_error, std::abs(total - r.demand) / r.demand);
  }
  cert.demand_checked = ok && cert.demand_error <= 1e-9;

  cert.edge_flow = std::move(load);
  for (std::size_t e = 0; e < cert.edges.size(); ++e) {
    const double f = cert.edge_flow[e];
    cert.rho_bar = std::max(cert.rho_bar, f);
    const auto cls = static_cast<std::size_t>(
        classify_edge(ctx.band(cert.edges[e].first), ctx.band(cert.edges[e].second), L));
    cert.class_max[cls] = std::max(cert.class_max[cls], f);
    ++cert.class_edges[cls];
  }
  for (double f : cert.edge_flow) {
    std::size_t bin = flow_histogram_bins - 1;
    if (f > 0.0) {
      const double decades = -std::log10(f / cert.rho_bar);
      bin = std::min(bin, static_cast<std::size_t>(std::max(0.0, std::floor(decades))));
    }
    ++cert.histogram[bin];
  }
  cert.lower_bound = 1.0 / cert.rho_bar;
  return cert;
}

double sinclair_bound(const FlowCertificate& certificate) {
  if (!certificate.demand_checked) {
    fail(ErrorCode::unchecked_demand, "flow demand was not verified; refusing to issue a certificate");
  }
  require(certificate.rho_bar > 0.0, ErrorCode::invalid_argument, "rho_bar must be positive");
  return 1.0 / certificate.rho_bar;
}

void write_certificate_header(std::ostream& out) {
  out << "k,rho_bar,lower_bound,demand_checked,demand_error,qprime_pairs,qsecond_pairs,fallback_pairs,"
         "segment_fallbacks,diameter,path_cap,max_path_length,nu_prime,ell_mid,ell_max\n";
}

void write_certificate_row(std::ostream& out, const FlowCertificate& c) {
  out << c.k << ',' << format_real(c.rho_bar) << ',' << format_real(c.lower_bound) << ','
      << (c.demand_checked ? 1 : 0) << ',' << format_real(c.demand_error) << ',' << c.qprime_pairs << ','
      << c.qsecond_pairs << ',' << c.fallback_pairs << ',' << c.segment_fallbacks << ',' << c.diameter << ','
      << c.path_cap << ',' << c.max_path_length << ',' << format_real(c.levels.nu_prime) << ',' << c.levels.ell_mid
      << ',' << c.levels.ell_max << '\n';
}

void write_edge_flows(std::ostream& out, const ComponentView& h, const FlowCertificate& c) {
  out << "u,v,class,flow\n";
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto [a, b] = c.edges[e];
    const auto cls = classify_edge(band_of(h.point(a).r), band_of(h.point(b).r), c.levels);
    out << h.global_id(a) << ',' << h.global_id(b) << ',' << to_string(cls) << ',' << format_real(c.edge_flow[e])
        << '\n';
  }
}

}  // namespace hrg
