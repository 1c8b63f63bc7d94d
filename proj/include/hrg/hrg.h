#ifndef HRG_H
#define HRG_H

/* C interface of the hyperbolic random graph library. Every call returns an
 * hrg_status; on failure hrg_last_error() describes the cause (per thread). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HRG_BUILDING_LIBRARY)
#define HRG_API __attribute__((visibility("default")))
#else
#define HRG_API
#endif

typedef enum hrg_status {
  HRG_OK = 0,
  HRG_E_INVALID_ARGUMENT = 1,
  HRG_E_DOMAIN = 2,
  HRG_E_DEGENERATE_LEVELS = 3,
  HRG_E_GUARD_EXCEEDED = 4,
  HRG_E_NOT_CONVERGED = 5,
  HRG_E_IO = 6,
  HRG_E_FORMAT = 7,
  HRG_E_NO_CENTER = 8,
  HRG_E_UNCHECKED_DEMAND = 9,
  HRG_E_DISCONNECTED = 10,
  HRG_E_INTERNAL = 11
} hrg_status;

typedef struct hrg_graph hrg_graph;
typedef struct hrg_component hrg_component;
typedef struct hrg_certificate hrg_certificate;

HRG_API const char* hrg_last_error(void);
HRG_API const char* hrg_status_name(hrg_status status);
HRG_API const char* hrg_rng_name(void);

/* ---- graphs ---- */

typedef struct hrg_params {
  double alpha;
  double C;
  uint64_t n;
  int poisson; /* 0 uniform, 1 Poissonized */
  uint64_t seed;
} hrg_params;

typedef struct hrg_graph_info {
  uint64_t vertices;
  uint64_t edges;
  double alpha;
  double C;
  uint64_t n;
  int poisson;
  uint64_t seed;
  double R;
  int ell_low, ell_min, ell_mid, ell_max, ell_bdr;
  double nu, nu_prime;
  int levels_ordered;
} hrg_graph_info;

HRG_API hrg_status hrg_generate(const hrg_params* params, unsigned threads, hrg_graph** out);
HRG_API hrg_status hrg_graph_load(const char* path, hrg_graph** out);
HRG_API hrg_status hrg_graph_save(const hrg_graph* graph, const char* path);
HRG_API hrg_status hrg_points_save(const hrg_graph* graph, const char* path);
HRG_API void hrg_graph_free(hrg_graph* graph);

HRG_API hrg_status hrg_graph_get_info(const hrg_graph* graph, hrg_graph_info* out);
HRG_API hrg_status hrg_graph_point(const hrg_graph* graph, uint64_t v, double* r, double* theta);
/* The neighbor array stays valid while the graph lives. */
HRG_API hrg_status hrg_graph_neighbors(const hrg_graph* graph, uint64_t v, const uint32_t** neighbors, size_t* count);

/* ---- components ---- */

HRG_API hrg_status hrg_center_component(const hrg_graph* graph, hrg_component** out);
HRG_API hrg_status hrg_giant_component(const hrg_graph* graph, hrg_component** out);
HRG_API void hrg_component_free(hrg_component* component);
HRG_API hrg_status hrg_component_size(const hrg_component* component, uint64_t* vertices, uint64_t* volume,
                                      uint64_t* edges);

typedef struct hrg_gap_result {
  double lambda1;
  double residual;
  int iterations;
  int method; /* 0 power, 1 lanczos, 2 dense */
} hrg_gap_result;

/* On HRG_E_NOT_CONVERGED, out still holds the best iterate. */
HRG_API hrg_status hrg_spectral_gap(const hrg_component* component, double tol, int max_iter, hrg_gap_result* out);

typedef struct hrg_cut_report {
  uint64_t set_size;
  uint64_t vol_set;
  uint64_t vol_complement;
  uint64_t boundary;
  double conductance;
} hrg_cut_report;

HRG_API hrg_status hrg_half_disk(const hrg_component* component, double reference_angle, hrg_cut_report* out);
/* found = 0 when no probe set fits under the volume cap n^eps. */
HRG_API hrg_status hrg_probe_small_sets(const hrg_component* component, double eps, uint64_t seed,
                                        hrg_cut_report* best, double* volume_cap, int* found);

typedef struct hrg_bisection {
  uint64_t size_first;
  uint64_t size_second;
  uint64_t crossing;
  uint64_t move_evaluations;
  uint64_t move_cap;
} hrg_bisection;

HRG_API hrg_status hrg_min_bisection(const hrg_component* component, uint64_t seed, hrg_bisection* out);
HRG_API hrg_status hrg_max_bisection(const hrg_component* component, uint64_t seed, hrg_bisection* out);

typedef struct hrg_cut_pair {
  uint64_t min_cut;
  int min_cut_exact; /* 0 when only the minimum-degree upper bound was affordable */
  uint64_t max_cut;
  uint64_t max_bisection;
} hrg_cut_pair;

HRG_API hrg_status hrg_min_max_cut(const hrg_component* component, uint64_t seed, hrg_cut_pair* out);

typedef struct hrg_diameter_result {
  uint32_t value;
  int lower_bound;
  uint32_t sweeps;
} hrg_diameter_result;

HRG_API hrg_status hrg_diameter(const hrg_component* component, int exact, uint64_t seed, hrg_diameter_result* out);

/* ---- flow certificate ---- */

typedef struct hrg_certify_options {
  uint64_t exact_cap;
  double nu_prime; /* NaN selects the automatic choice */
  uint64_t seed;
} hrg_certify_options;

HRG_API void hrg_certify_options_init(hrg_certify_options* options);

typedef struct hrg_certificate_summary {
  uint64_t k;
  double rho_bar;
  double lower_bound;
  int demand_checked;
  double demand_error;
  uint64_t qprime_pairs;
  uint64_t qsecond_pairs;
  uint64_t fallback_pairs;
  uint64_t segment_fallbacks;
  uint32_t diameter;
  uint32_t path_cap;
  uint32_t max_path_length;
  double nu_prime;
  int ell_mid;
  int ell_max;
} hrg_certificate_summary;

HRG_API hrg_status hrg_certify(const hrg_component* component, const hrg_certify_options* options,
                               hrg_certificate** out);
HRG_API hrg_status hrg_certificate_get_summary(const hrg_certificate* certificate, hrg_certificate_summary* out);
/* 1 / rho_bar; HRG_E_UNCHECKED_DEMAND when the demand check failed. */
HRG_API hrg_status hrg_certificate_bound(const hrg_certificate* certificate, double* bound);
/* edges_path may be NULL to skip the per-edge dump. */
HRG_API hrg_status hrg_certificate_write(const hrg_certificate* certificate, const char* summary_path,
                                         const char* edges_path);
HRG_API void hrg_certificate_free(hrg_certificate* certificate);

/* ---- experiments ---- */

typedef struct hrg_sweep_config {
  const double* alphas;
  size_t alpha_count;
  double C;
  const uint64_t* sizes;
  size_t size_count;
  int seeds;
  uint64_t base_seed;
  int poisson;
  const char* measurements; /* comma separated; NULL or "" for none */
  uint64_t exact_cap;
  double eps;
  double tol;
  double nu_prime; /* NaN: automatic */
  unsigned workers;
} hrg_sweep_config;

HRG_API void hrg_sweep_config_init(hrg_sweep_config* config);
/* Writes the CSV; failed_rows counts rows whose status is an error. */
HRG_API hrg_status hrg_sweep(const hrg_sweep_config* config, const char* csv_path, size_t* failed_rows);

typedef struct hrg_fit {
  double exponent;
  double intercept;
  double stderr_exponent;
  double r_squared;
  double correction_power;
  uint64_t sizes;
  uint64_t excluded;
} hrg_fit;

/* alpha NaN: rows of every alpha. */
HRG_API hrg_status hrg_fit_csv(const char* csv_path, const char* measurement, double alpha, int use_aux,
                               double correction_power, hrg_fit* out);
HRG_API hrg_status hrg_plot_csv(const char* csv_path, const char* measurement, double alpha, int use_aux,
                                double correction_power, const char* title, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif
