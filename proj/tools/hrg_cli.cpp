// Command-line driver over the C interface.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hrg/hrg.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct ModelFlags {
  double alpha = 0.75;
  double bigc = 0.0;
  std::uint64_t n = 1000;
  std::uint64_t seed = 1;
  std::string mode = "uniform";
  std::string in;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--alpha", f.alpha, "Shape parameter in (1/2, 1)");
  app->add_option("--bigc", f.bigc, "Offset C in R = 2 ln n + C");
  app->add_option("--n", f.n, "Target vertex count");
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--mode", f.mode, "Sampling mode")->check(CLI::IsMember({"uniform", "poisson"}));
}

int exit_code(hrg_status status) {
  switch (status) {
    case HRG_OK: return 0;
    case HRG_E_INVALID_ARGUMENT:
    case HRG_E_DOMAIN:
    case HRG_E_DEGENERATE_LEVELS:
    case HRG_E_IO:
    case HRG_E_FORMAT: return kExitConfig;
    default: return kExitPartial;
  }
}

// Prints the error and returns the exit code when status is not OK.
bool failed(hrg_status status, int& code) {
  if (status == HRG_OK) return false;
  std::fprintf(stderr, "error: %s: %s\n", hrg_status_name(status), hrg_last_error());
  code = exit_code(status);
  return true;
}

hrg_status obtain_graph(const ModelFlags& f, hrg_graph** graph) {
  if (!f.in.empty()) return hrg_graph_load(f.in.c_str(), graph);
  const hrg_params params{f.alpha, f.bigc, f.n, f.mode == "poisson" ? 1 : 0, f.seed};
  return hrg_generate(&params, 1, graph);
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto end = item.find(',', start);
      const auto piece = item.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!piece.empty()) out.push_back(piece);
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  return out;
}

int cmd_gen(const ModelFlags& f, const std::string& out, const std::string& points) {
  int code = 0;
  hrg_graph* g = nullptr;
  if (failed(obtain_graph(f, &g), code)) return code;
  hrg_graph_info info{};
  hrg_graph_get_info(g, &info);
  if (!out.empty() && failed(hrg_graph_save(g, out.c_str()), code)) {
  } else if (!points.empty() && failed(hrg_points_save(g, points.c_str()), code)) {
  } else {
    std::printf("vertices,%llu\nedges,%llu\nR,%.17g\n", static_cast<unsigned long long>(info.vertices),
                static_cast<unsigned long long>(info.edges), info.R);
  }
  hrg_graph_free(g);
  return code;
}

int cmd_analyze(const ModelFlags& f, double tol, double ref_angle, double eps) {
  int code = 0;
  hrg_graph* g = nullptr;
  if (failed(obtain_graph(f, &g), code)) return code;
  hrg_graph_info info{};
  hrg_graph_get_info(g, &info);
  std::printf("vertices,%llu\nedges,%llu\nR,%.17g\n", static_cast<unsigned long long>(info.vertices),
              static_cast<unsigned long long>(info.edges), info.R);
  std::printf("levels,%d,%d,%d,%d,%d\nlevels_ordered,%d\n", info.ell_low, info.ell_min, info.ell_mid, info.ell_max,
              info.ell_bdr, info.levels_ordered);
  hrg_component* h = nullptr;
  if (failed(hrg_center_component(g, &h), code)) {
    hrg_graph_free(g);
    return code;
  }
  std::uint64_t k = 0, vol = 0, m = 0;
  hrg_component_size(h, &k, &vol, &m);
  std::printf("center_vertices,%llu\ncenter_volume,%llu\ncenter_edges,%llu\n", static_cast<unsigned long long>(k),
              static_cast<unsigned long long>(vol), static_cast<unsigned long long>(m));

  int partial = 0;
  auto report = [&](hrg_status s) {
    if (s == HRG_OK) return true;
    std::fprintf(stderr, "warning: %s: %s\n", hrg_status_name(s), hrg_last_error());
    partial = kExitPartial;
    return false;
  };
  if (k >= 2) {
    hrg_gap_result gap{};
    const hrg_status s = hrg_spectral_gap(h, tol, 20000, &gap);
    report(s);
    std::printf("lambda1,%.17g\nlambda1_residual,%.3g\nlambda1_converged,%d\n", gap.lambda1, gap.residual, s == HRG_OK);
    hrg_cut_report half{};
    if (report(hrg_half_disk(h, ref_angle, &half))) {
      std::printf("halfdisk_boundary,%llu\nhalfdisk_conductance,%.17g\n",
                  static_cast<unsigned long long>(half.boundary), half.conductance);
    }
    hrg_cut_report best{};
    double cap = 0.0;
    int found = 0;
    if (report(hrg_probe_small_sets(h, eps, f.seed, &best, &cap, &found))) {
      std::printf("probe_volume_cap,%.17g\nprobe_found,%d\nprobe_conductance,%.17g\n", cap, found,
                  found ? best.conductance : std::nan(""));
    }
    hrg_bisection low{}, high{};
    if (report(hrg_min_bisection(h, f.seed, &low)))
      std::printf("min_bisection,%llu\n", static_cast<unsigned long long>(low.crossing));
    if (report(hrg_max_bisection(h, f.seed, &high)))
      std::printf("max_bisection,%llu\n", static_cast<unsigned long long>(high.crossing));
    hrg_cut_pair cuts{};
    if (report(hrg_min_max_cut(h, f.seed, &cuts))) {
      std::printf("min_cut,%llu\nmin_cut_exact,%d\nmax_cut,%llu\n", static_cast<unsigned long long>(cuts.min_cut),
                  cuts.min_cut_exact, static_cast<unsigned long long>(cuts.max_cut));
    }
    hrg_diameter_result d{};
    if (report(hrg_diameter(h, k <= 20000, f.seed, &d)))
      std::printf("diameter,%u\ndiameter_lower_bound,%d\n", d.value, d.lower_bound);
  }
  hrg_component_free(h);
  hrg_graph_free(g);
  return partial;
}

int cmd_certify(const ModelFlags& f, std::uint64_t exact_cap, const std::string& nu_prime, const std::string& out,
                const std::string& edges) {
  int code = 0;
  hrg_certify_options options;
  hrg_certify_options_init(&options);
  options.exact_cap = exact_cap;
  options.seed = f.seed;
  if (nu_prime != "auto") {
    try {
      options.nu_prime = std::stod(nu_prime);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: --nu-prime expects a number or 'auto'\n");
      return kExitConfig;
    }
  }
  hrg_graph* g = nullptr;
  if (failed(obtain_graph(f, &g), code)) return code;
  hrg_component* h = nullptr;
  hrg_certificate* cert = nullptr;
  if (!failed(hrg_center_component(g, &h), code) && !failed(hrg_certify(h, &options, &cert), code)) {
    hrg_certificate_summary s{};
    hrg_certificate_get_summary(cert, &s);
    std::printf("k,%llu\nrho_bar,%.17g\nfallback_pairs,%llu\nqprime_pairs,%llu\nqsecond_pairs,%llu\n"
                "diameter,%u\npath_cap,%u\nmax_path_length,%u\nnu_prime,%.17g\ndemand_checked,%d\n",
                static_cast<unsigned long long>(s.k), s.rho_bar, static_cast<unsigned long long>(s.fallback_pairs),
                static_cast<unsigned long long>(s.qprime_pairs), static_cast<unsigned long long>(s.qsecond_pairs),
                s.diameter, s.path_cap, s.max_path_length, s.nu_prime, s.demand_checked);
    double bound = 0.0;
    if (!failed(hrg_certificate_bound(cert, &bound), code)) std::printf("lambda1_lower_bound,%.17g\n", bound);
    if (code == 0 && !out.empty()) failed(hrg_certificate_write(cert, out.c_str(), edges.empty() ? nullptr : edges.c_str()), code);
  }
  hrg_certificate_free(cert);
  hrg_component_free(h);
  hrg_graph_free(g);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random hyperbolic graphs: generation, spectral gap, conductance, flow certificates, sweeps"};
  app.require_subcommand(1);

  ModelFlags model;
  std::string out, points, edges, nu_prime = "auto", measurement, title;
  double tol = 1e-8, ref_angle = 0.0, eps = 0.5, correction = 0.0;
  std::uint64_t exact_cap = 3000;
  bool use_aux = false;

  auto* gen = app.add_subcommand("gen", "Sample a graph and write it");
  add_model_flags(gen, model);
  gen->add_option("--out", out, "Graph file");
  gen->add_option("--points", points, "Point-set file");

  auto* analyze = app.add_subcommand("analyze", "Measure the center component of a graph");
  add_model_flags(analyze, model);
  analyze->add_option("--in", model.in, "Graph file (otherwise sampled from the model flags)");
  analyze->add_option("--tol", tol, "Eigensolver residual tolerance");
  analyze->add_option("--ref-angle", ref_angle, "Half-disk reference angle");
  analyze->add_option("--eps", eps, "Small-set volume exponent");

  auto* certify = app.add_subcommand("certify", "Build the flow certificate lambda1 >= 1/rho");
  add_model_flags(certify, model);
  certify->add_option("--in", model.in, "Graph file (otherwise sampled from the model flags)");
  certify->add_option("--exact-cap", exact_cap, "Largest component the exact flow accepts");
  certify->add_option("--nu-prime", nu_prime, "Layer slack nu' or 'auto'");
  certify->add_option("--out", out, "Summary CSV");
  certify->add_option("--edges", edges, "Per-edge flow CSV");

  std::vector<double> alphas;
  std::vector<std::uint64_t> sizes;
  std::vector<std::string> measures;
  int seeds = 5;
  unsigned workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Run measurements over (alpha, n, seed) cells");
  sweep->add_option("--alpha", alphas, "Alpha values")->required()->delimiter(',');
  sweep->add_option("--bigc", model.bigc, "Offset C");
  sweep->add_option("--n", sizes, "Sizes, ascending")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "Replicates per cell");
  sweep->add_option("--seed", model.seed, "Base seed");
  sweep->add_option("--mode", model.mode, "Sampling mode")->check(CLI::IsMember({"uniform", "poisson"}));
  sweep->add_option("--measure", measures, "Measurements")->delimiter(',');
  sweep->add_option("--out", out, "CSV output")->required();
  sweep->add_option("--exact-cap", exact_cap, "Flow certificate cap");
  sweep->add_option("--eps", eps, "Small-set volume exponent");
  sweep->add_option("--tol", tol, "Eigensolver tolerance");
  sweep->add_option("--nu-prime", nu_prime, "Layer slack nu' or 'auto'");
  sweep->add_option("--workers", workers, "Worker threads");

  std::string in_csv;
  double fit_alpha = std::nan("");
  auto* fit = app.add_subcommand("fit", "Fit a power law to sweep medians");
  fit->add_option("--in", in_csv, "Sweep CSV")->required();
  fit->add_option("--measure", measurement, "Measurement")->required();
  fit->add_option("--alpha", fit_alpha, "Restrict to one alpha");
  fit->add_option("--correction", correction, "Divide by (ln n)^p before fitting");
  fit->add_flag("--aux", use_aux, "Fit the aux column");

  auto* plot = app.add_subcommand("plot", "Log-log SVG of sweep medians with the fitted line");
  plot->add_option("--in", in_csv, "Sweep CSV")->required();
  plot->add_option("--measure", measurement, "Measurement")->required();
  plot->add_option("--alpha", fit_alpha, "Restrict to one alpha");
  plot->add_option("--correction", correction, "Divide by (ln n)^p");
  plot->add_flag("--aux", use_aux, "Plot the aux column");
  plot->add_option("--title", title, "Title");
  plot->add_option("--out", out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*gen) return cmd_gen(model, out, points);
  if (*analyze) return cmd_analyze(model, tol, ref_angle, eps);
  if (*certify) return cmd_certify(model, exact_cap, nu_prime, out, edges);

  int code = 0;
  if (*sweep) {
    hrg_sweep_config config;
    hrg_sweep_config_init(&config);
    config.alphas = alphas.data();
    config.alpha_count = alphas.size();
    config.sizes = sizes.data();
    config.size_count = sizes.size();
    config.C = model.bigc;
    config.seeds = seeds;
    config.base_seed = model.seed;
    config.poisson = model.mode == "poisson";
    std::string joined;
    for (const auto& m : split_commas(measures)) joined += (joined.empty() ? "" : ",") + m;
    config.measurements = joined.c_str();
    config.exact_cap = exact_cap;
    config.eps = eps;
    config.tol = tol;
    config.workers = workers;
    if (nu_prime != "auto") {
      try {
        config.nu_prime = std::stod(nu_prime);
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: --nu-prime expects a number or 'auto'\n");
        return kExitConfig;
      }
    }
    std::size_t failures = 0;
    if (failed(hrg_sweep(&config, out.c_str(), &failures), code)) return code;
    if (failures > 0) {
      std::fprintf(stderr, "warning: %zu rows failed\n", failures);
      return kExitPartial;
    }
    return 0;
  }
  if (*fit) {
    hrg_fit result{};
    if (failed(hrg_fit_csv(in_csv.c_str(), measurement.c_str(), fit_alpha, use_aux, correction, &result), code)) return code;
    std::printf("exponent,%.17g\nstderr,%.17g\nr_squared,%.17g\nintercept,%.17g\ncorrection,%.17g\nsizes,%llu\nexcluded,%llu\n",
                result.exponent, result.stderr_exponent, result.r_squared, result.intercept, result.correction_power,
                static_cast<unsigned long long>(result.sizes), static_cast<unsigned long long>(result.excluded));
    return 0;
  }
  if (*plot) {
    failed(hrg_plot_csv(in_csv.c_str(), measurement.c_str(), fit_alpha, use_aux, correction, title.c_str(), out.c_str()), code);
    return code;
  }
  return 0;
}
