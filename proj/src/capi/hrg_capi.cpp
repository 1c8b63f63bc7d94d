#include "hrg/hrg.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hrg/components.hpp"
#include "hrg/conductance.hpp"
#include "hrg/error.hpp"
#include "hrg/experiment.hpp"
#include "hrg/flowcert.hpp"
#include "hrg/graph.hpp"
#include "hrg/rng.hpp"
#include "hrg/spectral.hpp"

struct hrg_graph {
  hrg::GraphPtr graph;
};

struct hrg_component {
  hrg::ComponentView view;
};

struct hrg_certificate {
  hrg::ComponentView view;
  hrg::FlowCertificate cert;
};

namespace {

thread_local std::string last_error;

hrg_status record(hrg_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
hrg_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return HRG_OK;
  } catch (const hrg::Error& e) {
    return record(static_cast<hrg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(HRG_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(HRG_E_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) hrg::fail(hrg::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

std::ofstream open_out(const char* path) {
  need(path, "path");
  std::ofstream out(path);
  if (!out) hrg::fail(hrg::ErrorCode::io, std::string("cannot open ") + path + " for writing");
  return out;
}

std::ifstream open_in(const char* path) {
  need(path, "path");
  std::ifstream in(path);
  if (!in) hrg::fail(hrg::ErrorCode::io, std::string("cannot open ") + path);
  return in;
}

void check_written(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) hrg::fail(hrg::ErrorCode::io, std::string("write failed: ") + path);
}

void fill(const hrg::CutReport& r, hrg_cut_report* out) {
  out->set_size = r.set_size;
  out->vol_set = r.vol_set;
  out->vol_complement = r.vol_complement;
  out->boundary = r.boundary;
  out->conductance = r.conductance;
}

void fill(const hrg::BisectionResult& r, hrg_bisection* out) {
  out->size_first = r.size_first;
  out->size_second = r.size_second;
  out->crossing = r.crossing;
  out->move_evaluations = r.move_evaluations;
  out->move_cap = r.move_cap;
}

std::vector<hrg::SweepRow> load_rows(const char* csv_path) {
  auto in = open_in(csv_path);
  return hrg::read_sweep_csv(in);
}

hrg::FitRequest fit_request(const char* measurement, double alpha, int use_aux, double correction_power) {
  need(measurement, "measurement");
  hrg::FitRequest request;
  request.measurement = measurement;
  if (!std::isnan(alpha)) request.alpha = alpha;
  request.use_aux = use_aux != 0;
  request.correction_power = correction_power;
  return request;
}

}  // namespace

extern "C" {

const char* hrg_last_error(void) { return last_error.c_str(); }

const char* hrg_status_name(hrg_status status) {
  if (status == HRG_OK) return "ok";
  return hrg::to_string(static_cast<hrg::ErrorCode>(status));
}

const char* hrg_rng_name(void) { return hrg::Rng::algorithm; }

hrg_status hrg_generate(const hrg_params* params, unsigned threads, hrg_graph** out) {
  return guarded([&] {
    need(params, "params");
    need(out, "out");
    const auto p = hrg::ModelParams::make(params->alpha, params->C, params->n,
                                          params->poisson ? hrg::SamplingMode::poisson : hrg::SamplingMode::uniform,
                                          params->seed);
    hrg::BuildOptions options;
    options.threads = threads == 0 ? 1 : threads;
    *out = new hrg_graph{hrg::build_graph(hrg::sample_points(p), options)};
  });
}

hrg_status hrg_graph_load(const char* path, hrg_graph** out) {
  return guarded([&] {
    need(out, "out");
    auto in = open_in(path);
    *out = new hrg_graph{hrg::read_graph(in)};
  });
}

hrg_status hrg_graph_save(const hrg_graph* graph, const char* path) {
  return guarded([&] {
    need(graph, "graph");
    auto out = open_out(path);
    hrg::write_graph(out, *graph->graph);
    check_written(out, path);
  });
}

hrg_status hrg_points_save(const hrg_graph* graph, const char* path) {
  return guarded([&] {
    need(graph, "graph");
    auto out = open_out(path);
    const auto& g = *graph->graph;
    hrg::PointSet set{g.params(), std::vector<hrg::PolarPoint>(g.points().begin(), g.points().end())};
    hrg::write_points(out, set);
    check_written(out, path);
  });
}

void hrg_graph_free(hrg_graph* graph) { delete graph; }

hrg_status hrg_graph_get_info(const hrg_graph* graph, hrg_graph_info* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "out");
    const auto& g = *graph->graph;
    const auto& p = g.params();
    const auto& L = g.levels();
    *out = hrg_graph_info{};
    out->vertices = g.vertex_count();
    out->edges = g.edge_count();
    out->alpha = p.alpha;
    out->C = p.C;
    out->n = p.n;
    out->poisson = p.mode == hrg::SamplingMode::poisson;
    out->seed = p.seed;
    out->R = g.radius();
    out->ell_low = L.ell_low;
    out->ell_min = L.ell_min;
    out->ell_mid = L.ell_mid;
    out->ell_max = L.ell_max;
    out->ell_bdr = L.ell_bdr;
    out->nu = L.nu;
    out->nu_prime = L.nu_prime;
    out->levels_ordered = L.ordered();
  });
}

hrg_status hrg_graph_point(const hrg_graph* graph, uint64_t v, double* r, double* theta) {
  return guarded([&] {
    need(graph, "graph");
    hrg::require(v < graph->graph->vertex_count(), hrg::ErrorCode::invalid_argument, "vertex id out of range");
    const auto& p = graph->graph->point(static_cast<hrg::VertexId>(v));
    if (r) *r = p.r;
    if (theta) *theta = p.theta;
  });
}

hrg_status hrg_graph_neighbors(const hrg_graph* graph, uint64_t v, const uint32_t** neighbors, size_t* count) {
  return guarded([&] {
    need(graph, "graph");
    need(neighbors, "neighbors");
    need(count, "count");
    hrg::require(v < graph->graph->vertex_count(), hrg::ErrorCode::invalid_argument, "vertex id out of range");
    const auto row = graph->graph->neighbors(static_cast<hrg::VertexId>(v));
    *neighbors = row.data();
    *count = row.size();
  });
}

hrg_status hrg_center_component(const hrg_graph* graph, hrg_component** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "out");
    *out = new hrg_component{hrg::center_component(graph->graph)};
  });
}

hrg_status hrg_giant_component(const hrg_graph* graph, hrg_component** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "out");
    *out = new hrg_component{hrg::giant_component(graph->graph)};
  });
}

void hrg_component_free(hrg_component* component) { delete component; }

hrg_status hrg_component_size(const hrg_component* component, uint64_t* vertices, uint64_t* volume, uint64_t* edges) {
  return guarded([&] {
    need(component, "component");
    if (vertices) *vertices = component->view.size();
    if (volume) *volume = component->view.vol();
    if (edges) *edges = component->view.edge_count();
  });
}

hrg_status hrg_spectral_gap(const hrg_component* component, double tol, int max_iter, hrg_gap_result* out) {
  if (out == nullptr) return record(HRG_E_INVALID_ARGUMENT, "out must not be NULL");
  *out = hrg_gap_result{};
  try {
    need(component, "component");
    const auto r = hrg::spectral_gap(component->view, tol, max_iter);
    out->lambda1 = r.lambda1;
    out->residual = r.residual;
    out->iterations = r.iterations;
    out->method = static_cast<int>(r.method);
    last_error.clear();
    return HRG_OK;
  } catch (const hrg::NotConverged& e) {
    out->lambda1 = e.best_value();
    out->residual = e.residual();
    out->iterations = e.iterations();
    out->method = static_cast<int>(hrg::SpectralMethod::lanczos);
    return record(HRG_E_NOT_CONVERGED, e.what());
  } catch (const hrg::Error& e) {
    return record(static_cast<hrg_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return record(HRG_E_INTERNAL, e.what());
  }
}

hrg_status hrg_half_disk(const hrg_component* component, double reference_angle, hrg_cut_report* out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    fill(hrg::half_disk_conductance(component->view, reference_angle), out);
  });
}

hrg_status hrg_probe_small_sets(const hrg_component* component, double eps, uint64_t seed, hrg_cut_report* best,
                                double* volume_cap, int* found) {
  return guarded([&] {
    need(component, "component");
    need(best, "best");
    hrg::ProbeOptions options;
    options.seed = seed;
    const auto r = hrg::probe_small_sets(component->view, eps, options);
    *best = hrg_cut_report{};
    if (!r.empty) fill(r.best, best);
    if (volume_cap) *volume_cap = r.volume_cap;
    if (found) *found = r.empty ? 0 : 1;
  });
}

hrg_status hrg_min_bisection(const hrg_component* component, uint64_t seed, hrg_bisection* out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    hrg::BisectionOptions options;
    options.seed = seed;
    fill(hrg::min_bisection_heuristic(component->view, options), out);
  });
}

hrg_status hrg_max_bisection(const hrg_component* component, uint64_t seed, hrg_bisection* out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    hrg::BisectionOptions options;
    options.seed = seed;
    fill(hrg::max_bisection_heuristic(component->view, options), out);
  });
}

hrg_status hrg_min_max_cut(const hrg_component* component, uint64_t seed, hrg_cut_pair* out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    hrg::BisectionOptions options;
    options.seed = seed;
    const auto r = hrg::min_cut_and_max_cut(component->view, options);
    out->min_cut = r.min_cut;
    out->min_cut_exact = r.min_cut_method != "min_degree_upper_bound";
    out->max_cut = r.max_cut;
    out->max_bisection = r.max_bisection;
  });
}

hrg_status hrg_diameter(const hrg_component* component, int exact, uint64_t seed, hrg_diameter_result* out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    const auto r = hrg::diameter(component->view, exact ? hrg::DiameterMode::exact : hrg::DiameterMode::sampled, seed);
    out->value = r.value;
    out->lower_bound = r.lower_bound;
    out->sweeps = r.sweeps;
  });
}

void hrg_certify_options_init(hrg_certify_options* options) {
  if (!options) return;
  options->exact_cap = hrg::FlowOptions{}.exact_cap;
  options->nu_prime = std::nan("");
  options->seed = 0;
}

hrg_status hrg_certify(const hrg_component* component, const hrg_certify_options* options, hrg_certificate** out) {
  return guarded([&] {
    need(component, "component");
    need(out, "out");
    hrg::FlowOptions flow;
    if (options) {
      flow.exact_cap = options->exact_cap;
      if (!std::isnan(options->nu_prime)) flow.nu_prime = options->nu_prime;
      flow.seed = options->seed;
    }
    auto cert = hrg::build_flow(component->view, flow);
    *out = new hrg_certificate{component->view, std::move(cert)};
  });
}

hrg_status hrg_certificate_get_summary(const hrg_certificate* certificate, hrg_certificate_summary* out) {
  return guarded([&] {
    need(certificate, "certificate");
    need(out, "out");
    const auto& c = certificate->cert;
    out->k = c.k;
    out->rho_bar = c.rho_bar;
    out->lower_bound = c.lower_bound;
    out->demand_checked = c.demand_checked;
    out->demand_error = c.demand_error;
    out->qprime_pairs = c.qprime_pairs;
    out->qsecond_pairs = c.qsecond_pairs;
    out->fallback_pairs = c.fallback_pairs;
    out->segment_fallbacks = c.segment_fallbacks;
    out->diameter = c.diameter;
    out->path_cap = c.path_cap;
    out->max_path_length = c.max_path_length;
    out->nu_prime = c.levels.nu_prime;
    out->ell_mid = c.levels.ell_mid;
    out->ell_max = c.levels.ell_max;
  });
}

hrg_status hrg_certificate_bound(const hrg_certificate* certificate, double* bound) {
  return guarded([&] {
    need(certificate, "certificate");
    need(bound, "bound");
    *bound = hrg::sinclair_bound(certificate->cert);
  });
}

hrg_status hrg_certificate_write(const hrg_certificate* certificate, const char* summary_path, const char* edges_path) {
  return guarded([&] {
    need(certificate, "certificate");
    auto out = open_out(summary_path);
    hrg::write_certificate_header(out);
    hrg::write_certificate_row(out, certificate->cert);
    check_written(out, summary_path);
    if (edges_path) {
      auto edges = open_out(edges_path);
      hrg::write_edge_flows(edges, certificate->view, certificate->cert);
      check_written(edges, edges_path);
    }
  });
}

void hrg_certificate_free(hrg_certificate* certificate) { delete certificate; }

void hrg_sweep_config_init(hrg_sweep_config* config) {
  if (!config) return;
  const hrg::SweepConfig defaults;
  *config = hrg_sweep_config{};
  config->C = defaults.C;
  config->seeds = defaults.seeds;
  config->base_seed = defaults.base_seed;
  config->exact_cap = defaults.exact_cap;
  config->eps = defaults.eps;
  config->tol = defaults.tol;
  config->nu_prime = std::nan("");
  config->workers = 1;
}

hrg_status hrg_sweep(const hrg_sweep_config* config, const char* csv_path, size_t* failed_rows) {
  return guarded([&] {
    need(config, "config");
    hrg::SweepConfig sweep;
    sweep.alphas.assign(config->alphas, config->alphas + config->alpha_count);
    sweep.sizes.assign(config->sizes, config->sizes + config->size_count);
    sweep.C = config->C;
    sweep.seeds = config->seeds;
    sweep.base_seed = config->base_seed;
    sweep.mode = config->poisson ? hrg::SamplingMode::poisson : hrg::SamplingMode::uniform;
    if (config->measurements) {
      std::istringstream list(config->measurements);
      std::string name;
      while (std::getline(list, name, ','))
        if (!name.empty()) sweep.measurements.push_back(name);
    }
    sweep.exact_cap = config->exact_cap;
    sweep.eps = config->eps;
    sweep.tol = config->tol;
    if (!std::isnan(config->nu_prime)) sweep.nu_prime = config->nu_prime;
    sweep.workers = config->workers;
    hrg::validate(sweep);
    auto out = open_out(csv_path);
    const auto rows = hrg::run_sweep(sweep);
    hrg::write_sweep_csv(out, rows);
    check_written(out, csv_path);
    if (failed_rows) {
      *failed_rows = 0;
      for (const auto& r : rows) *failed_rows += (r.status != "ok" && r.status != "empty") ? 1 : 0;
    }
  });
}

hrg_status hrg_fit_csv(const char* csv_path, const char* measurement, double alpha, int use_aux,
                       double correction_power, hrg_fit* out) {
  return guarded([&] {
    need(out, "out");
    const auto fit = hrg::fit_exponent(load_rows(csv_path), fit_request(measurement, alpha, use_aux, correction_power));
    out->exponent = fit.exponent;
    out->intercept = fit.intercept;
    out->stderr_exponent = fit.stderr_exponent;
    out->r_squared = fit.r_squared;
    out->correction_power = fit.correction_power;
    out->sizes = fit.sizes;
    out->excluded = fit.excluded;
  });
}

hrg_status hrg_plot_csv(const char* csv_path, const char* measurement, double alpha, int use_aux,
                        double correction_power, const char* title, const char* svg_path) {
  return guarded([&] {
    const auto rows = load_rows(csv_path);
    hrg::PlotSpec spec;
    spec.title = title ? title : "";
    spec.y_label = measurement ? measurement : "";
    auto out = open_out(svg_path);
    hrg::emit_plot(out, rows, fit_request(measurement, alpha, use_aux, correction_power), spec);
    check_written(out, svg_path);
  });
}

}  // extern "C"
