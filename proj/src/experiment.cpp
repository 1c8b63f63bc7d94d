#include "hrg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hrg/components.hpp"
#include "hrg/conductance.hpp"
#include "hrg/error.hpp"
#include "hrg/flowcert.hpp"
#include "hrg/graph.hpp"
#include "hrg/rng.hpp"
#include "hrg/spectral.hpp"

namespace hrg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t measurement_rank(const std::string& name) {
  const auto& names = measurement_names();
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

// Lazily built per-cell state shared by the measurements of one cell.
class Cell {
 public:
  Cell(const SweepConfig& config, double alpha, std::uint64_t n, int replicate)
      : config_(config),
        params_(ModelParams::make(alpha, config.C, n, config.mode,
                                  derive_seed(config.base_seed, static_cast<std::uint64_t>(replicate)))) {}

  const ModelParams& params() const { return params_; }

  const GeoGraph& graph() {
    if (!graph_) graph_ = build_graph(sample_points(params_));
    return *graph_;
  }

  const ComponentView& center() {
    graph();
    if (!center_) center_ = std::make_unique<ComponentView>(center_component(graph_));
    return *center_;
  }

  const SpectralResult& spectrum() {
    if (!spectrum_) {
      SpectralOptions options;
      options.tol = config_.tol;
      spectrum_ = std::make_unique<SpectralResult>(spectral_gap(center(), options));
    }
    return *spectrum_;
  }

  void measure(const std::string& name, SweepRow& row) {
    if (name == "degrees") {
      const auto& g = graph();
      std::uint32_t top = 0;
      for (VertexId v = 0; v < g.vertex_count(); ++v) top = std::max(top, g.degree(v));
      row.k = g.vertex_count();
      row.value = g.vertex_count() ? 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count()) : 0.0;
      row.aux = top;
      row.method = "mean_max";
    } else if (name == "bands") {
      const auto& g = graph();
      const Levels& L = g.levels();
      std::uint64_t inside = 0;
      int top = 0;
      for (const auto& p : g.points()) {
        top = std::max(top, band_of(p.r));
        inside += band_of(p.r) <= L.ell_max ? 1 : 0;
      }
      row.k = g.vertex_count();
      row.value = g.vertex_count() ? static_cast<double>(inside) / static_cast<double>(g.vertex_count()) : 0.0;
      row.aux = top;
      row.method = "inner_fraction_top_band";
    } else if (name == "giant") {
      const auto& g = graph();
      const ComponentView giant = giant_component(graph_);
      row.k = giant.size();
      row.value = static_cast<double>(giant.size()) / static_cast<double>(g.vertex_count());
      try {
        row.aux = static_cast<double>(center().size()) / static_cast<double>(g.vertex_count());
      } catch (const Error&) {
        row.aux = kNaN;
      }
      row.method = "giant_fraction";
    } else if (name == "gap") {
      const auto& s = spectrum();
      row.k = center().size();
      row.value = s.lambda1;
      row.aux = s.residual;
      row.method = to_string(s.method);
    } else if (name == "halfdisk") {
      const auto report = half_disk_conductance(center());
      row.k = center().size();
      row.value = static_cast<double>(report.boundary);
      row.aux = report.conductance;
      row.method = "half_disk";
    } else if (name == "probes") {
      ProbeOptions options;
      options.seed = params_.seed;
      const auto probe = probe_small_sets(center(), config_.eps, options);
      row.k = center().size();
      row.value = probe.empty ? kNaN : probe.best.conductance;
      row.aux = probe.volume_cap;
      row.method = probe_family_name(probe.witness_family);
      if (probe.empty) row.status = "empty";
    } else if (name == "bisection") {
      BisectionOptions options;
      options.seed = params_.seed;
      options.spectral = &spectrum();
      const auto low = min_bisection_heuristic(center(), options);
      const auto high = max_bisection_heuristic(center(), options);
      row.k = center().size();
      row.value = static_cast<double>(low.crossing);
      row.aux = static_cast<double>(high.crossing);
      row.method = low.method;
    } else if (name == "mincut") {
      BisectionOptions options;
      options.seed = params_.seed;
      const auto cuts = min_cut_and_max_cut(center(), options);
      row.k = center().size();
      row.value = static_cast<double>(cuts.min_cut);
      row.aux = static_cast<double>(cuts.max_cut);
      row.method = cuts.min_cut_method;
    } else if (name == "certificate") {
      FlowOptions options;
      options.exact_cap = config_.exact_cap;
      options.nu_prime = config_.nu_prime;
      options.seed = params_.seed;
      const auto cert = build_flow(center(), options);
      row.k = center().size();
      row.value = sinclair_bound(cert);
      row.aux = static_cast<double>(cert.fallback_pairs);
      row.method = "sinclair";
    } else if (name == "diameter") {
      const auto& h = center();
      const auto mode = h.size() <= exact_diameter_limit ? DiameterMode::exact : DiameterMode::sampled;
      const auto d = diameter(h, mode, params_.seed);
      row.k = h.size();
      row.value = d.value;
      row.aux = d.sweeps;
      row.method = d.lower_bound ? "sampled_lower_bound" : "exact";
    } else {
      fail(ErrorCode::invalid_argument, "unknown measurement " + name);
    }
  }

 private:
  const SweepConfig& config_;
  ModelParams params_;
  GraphPtr graph_;
  std::unique_ptr<ComponentView> center_;
  std::unique_ptr<SpectralResult> spectrum_;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  require(end != text.c_str() && *end == '\0', ErrorCode::format, "malformed number in sweep CSV");
  return v;
}

std::uint64_t parse_uint(const std::string& text) {
  char* end = nullptr;
  const auto v = std::strtoull(text.c_str(), &end, 10);
  require(end != text.c_str() && *end == '\0', ErrorCode::format, "malformed integer in sweep CSV");
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Medians {
  std::vector<double> n, y;
  std::size_t excluded = 0;
  std::size_t min_count = std::numeric_limits<std::size_t>::max();
};

Medians collect_medians(const std::vector<SweepRow>& rows, const FitRequest& request) {
  std::map<std::uint64_t, std::vector<double>> by_n;
  Medians m;
  for (const auto& r : rows) {
    if (r.measurement != request.measurement || r.status != "ok") continue;
    if (request.alpha && r.alpha != *request.alpha) continue;
    const double v = request.use_aux ? r.aux : r.value;
    if (!(v > 0.0)) {
      ++m.excluded;
      continue;
    }
    by_n[r.n].push_back(v);
  }
  for (auto& [n, values] : by_n) {
    m.n.push_back(static_cast<double>(n));
    m.y.push_back(median(values));
    m.min_count = std::min(m.min_count, values.size());
  }
  return m;
}

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& measurement_names() {
  static const std::vector<std::string> names{"degrees", "bands",   "giant",       "gap",     "halfdisk",
                                              "probes",  "bisection", "mincut", "certificate", "diameter"};
  return names;
}

void validate(const SweepConfig& config) {
  for (double a : config.alphas) {
    require(a > 0.5 && a < 1.0, ErrorCode::invalid_argument, "alpha must lie in (1/2, 1)");
  }
  require(std::is_sorted(config.sizes.begin(), config.sizes.end()), ErrorCode::invalid_argument,
          "sizes must be ascending");
  for (auto n : config.sizes) require(n >= 2, ErrorCode::invalid_argument, "sizes must be at least 2");
  require(config.seeds > 0, ErrorCode::invalid_argument, "seeds must be positive");
  for (const auto& m : config.measurements) {
    if (measurement_rank(m) == measurement_names().size()) fail(ErrorCode::invalid_argument, "unknown measurement " + m);
  }
  require(config.eps > 0.0 && config.eps < 1.0, ErrorCode::invalid_argument, "eps must lie in (0, 1)");
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  std::vector<std::string> measurements = config.measurements;
  std::sort(measurements.begin(), measurements.end(),
            [](const auto& a, const auto& b) { return measurement_rank(a) < measurement_rank(b); });
  measurements.erase(std::unique(measurements.begin(), measurements.end()), measurements.end());
  if (measurements.empty()) return {};

  struct Task {
    double alpha;
    std::uint64_t n;
    int replicate;
  };
  std::vector<Task> tasks;
  for (double a : config.alphas)
    for (auto n : config.sizes)
      for (int r = 0; r < config.seeds; ++r) tasks.push_back({a, n, r});

  std::vector<std::vector<SweepRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      std::unique_ptr<Cell> cell;
      std::string cell_error;
      try {
        cell = std::make_unique<Cell>(config, task.alpha, task.n, task.replicate);
      } catch (const Error& e) {
        cell_error = to_string(e.code());
      }
      for (const auto& name : measurements) {
        SweepRow row;
        row.alpha = task.alpha;
        row.C = config.C;
        row.n = task.n;
        row.replicate = task.replicate;
        row.seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(task.replicate));
        row.measurement = name;
        const auto start = std::chrono::steady_clock::now();
        if (!cell) {
          row.status = cell_error;
        } else {
          try {
            cell->measure(name, row);
          } catch (const Error& e) {
            row.status = to_string(e.code());
          } catch (const std::exception&) {
            row.status = to_string(ErrorCode::internal);
          }
        }
        if (row.status != "ok" && row.status != "empty") {
          row.value = kNaN;
          row.aux = kNaN;
        }
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        results[i].push_back(std::move(row));
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(tasks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Tasks were enumerated in canonical (alpha, n, replicate) order already.
  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool include_runtime) {
  out << "schema,rng,alpha,C,n,replicate,seed,measurement,value,aux,k,method,status";
  if (include_runtime) out << ",runtime_ms";
  out << '\n';
  for (const auto& r : rows) {
    out << r.schema << ',' << Rng::algorithm << ',' << format_real(r.alpha) << ',' << format_real(r.C) << ',' << r.n
        << ',' << r.replicate << ',' << r.seed << ',' << r.measurement << ',' << format_real(r.value) << ','
        << format_real(r.aux) << ',' << r.k << ',' << r.method << ',' << r.status;
    if (include_runtime) out << ',' << format_real(r.runtime_ms);
    out << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::format, "empty sweep CSV");
  const auto header = split(line, ',');
  require(header.size() >= 13 && header[0] == "schema", ErrorCode::format, "not a sweep CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    require(f.size() == header.size(), ErrorCode::format, "sweep CSV row has the wrong number of fields");
    SweepRow r;
    r.schema = static_cast<int>(parse_uint(f[0]));
    if (r.schema != sweep_schema_version) {
      fail(ErrorCode::format, "unsupported sweep CSV schema version " + f[0]);
    }
    r.alpha = parse_double(f[2]);
    r.C = parse_double(f[3]);
    r.n = parse_uint(f[4]);
    r.replicate = static_cast<int>(parse_uint(f[5]));
    r.seed = parse_uint(f[6]);
    r.measurement = f[7];
    r.value = parse_double(f[8]);
    r.aux = parse_double(f[9]);
    r.k = parse_uint(f[10]);
    r.method = f[11];
    r.status = f[12];
    if (f.size() > 13) r.runtime_ms = parse_double(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double correction_power) {
  require(x.size() == y.size(), ErrorCode::invalid_argument, "x and y differ in length");
  require(x.size() >= 2, ErrorCode::invalid_argument, "a fit needs at least 2 points");
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::domain, "power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    if (correction_power != 0.0) {
      require(x[i] > 1.0, ErrorCode::domain, "log correction needs x > 1");
      ly[i] -= correction_power * std::log(std::log(x[i]));
    }
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorCode::domain, "fit needs at least 2 distinct x values");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.correction_power = correction_power;
  fit.sizes = m;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ly[i] - fit.intercept - fit.exponent * lx[i];
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.stderr_exponent = m > 2 ? std::sqrt(sse / static_cast<double>(m - 2) / sxx) : 0.0;
  return fit;
}

ScalingFit fit_exponent(const std::vector<SweepRow>& rows, const FitRequest& request) {
  const Medians m = collect_medians(rows, request);
  if (m.n.size() < request.min_sizes) {
    fail(ErrorCode::invalid_argument, "fit needs at least " + std::to_string(request.min_sizes) +
                                          " sizes with positive values, got " + std::to_string(m.n.size()));
  }
  if (m.min_count < request.min_seeds) {
    fail(ErrorCode::invalid_argument, "fit needs at least " + std::to_string(request.min_seeds) + " seeds per size");
  }
  ScalingFit fit = fit_power_law(m.n, m.y, request.correction_power);
  fit.excluded = m.excluded;
  return fit;
}

void emit_plot(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y, const PlotSpec& spec) {
  require(x.size() == y.size(), ErrorCode::invalid_argument, "x and y differ in length");
  constexpr double width = 640, height = 480, left = 70, right = 20, top = 40, bottom = 60;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  }
  auto range = [](const std::vector<double>& v) {
    if (v.empty()) return std::pair<double, double>{0.0, 1.0};
    double lo = std::floor(*std::min_element(v.begin(), v.end()));
    double hi = std::ceil(*std::max_element(v.begin(), v.end()));
    if (hi <= lo) hi = lo + 1.0;
    return std::pair<double, double>{lo, hi};
  };
  const auto [x0, x1] = range(lx);
  const auto [y0, y1] = range(ly);
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double v) { return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(spec.title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << svg_number(left) << "\" y1=\"" << svg_number(height - bottom) << "\" x2=\""
      << svg_number(width - right) << "\" y2=\"" << svg_number(height - bottom) << "\"/>\n"
      << "<line x1=\"" << svg_number(left) << "\" y1=\"" << svg_number(top) << "\" x2=\"" << svg_number(left)
      << "\" y2=\"" << svg_number(height - bottom) << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0) {
    out << "<text x=\"" << svg_number(px(d)) << "\" y=\"" << svg_number(height - bottom + 16)
        << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1.0) {
    out << "<text x=\"" << svg_number(left - 6) << "\" y=\"" << svg_number(py(d) + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  out << "<text x=\"" << svg_number((left + width - right) / 2) << "\" y=\"" << svg_number(height - 16)
      << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << svg_number((top + height - bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << svg_number((top + height - bottom) / 2) << ")\">" << escape_xml(spec.y_label) << "</text>\n</g>\n";
  out << "<g fill=\"steelblue\">\n";
  for (std::size_t i = 0; i < lx.size(); ++i) {
    out << "<circle cx=\"" << svg_number(px(lx[i])) << "\" cy=\"" << svg_number(py(ly[i])) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n";
  if (spec.fit_line && lx.size() >= 2 && *std::max_element(lx.begin(), lx.end()) > *std::min_element(lx.begin(), lx.end())) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      xs.push_back(std::pow(10.0, lx[i]));
      ys.push_back(std::pow(10.0, ly[i]));
    }
    const ScalingFit fit = fit_power_law(xs, ys);
    const double a = *std::min_element(lx.begin(), lx.end()), b = *std::max_element(lx.begin(), lx.end());
    const double ln10 = std::log(10.0);
    auto line_y = [&](double l) { return (fit.intercept + fit.exponent * l * ln10) / ln10; };
    out << "<line stroke=\"firebrick\" stroke-width=\"1.5\" x1=\"" << svg_number(px(a)) << "\" y1=\""
        << svg_number(py(line_y(a))) << "\" x2=\"" << svg_number(px(b)) << "\" y2=\"" << svg_number(py(line_y(b)))
        << "\"/>\n";
    char label[96];
    std::snprintf(label, sizeof label, "slope %.4f, R^2 %.4f", fit.exponent, fit.r_squared);
    out << "<text x=\"" << svg_number(width - right) << "\" y=\"" << svg_number(top + 12)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  }
  out << "</svg>\n";
}

void emit_plot(std::ostream& out, const std::vector<SweepRow>& rows, const FitRequest& request, const PlotSpec& spec) {
  const Medians m = collect_medians(rows, request);
  std::vector<double> y = m.y;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::pow(std::log(m.n[i]), request.correction_power);
  emit_plot(out, m.n, y, spec);
}

}  // namespace hrg
