#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrg/geometry.hpp"

namespace hrg {

inline constexpr int sweep_schema_version = 1;

// Recognised measurement names, in canonical row order.
const std::vector<std::string>& measurement_names();

struct SweepConfig {
  std::vector<double> alphas{0.75};
  double C = 0.0;
  std::vector<std::uint64_t> sizes{1024};  // ascending
  int seeds = 5;
  std::uint64_t base_seed = 1;
  SamplingMode mode = SamplingMode::uniform;
  std::vector<std::string> measurements;
  std::size_t exact_cap = 3000;        // flow certificate
  double eps = 0.5;                    // small-set probes
  double tol = 1e-8;                   // eigensolver
  std::optional<double> nu_prime;      // flow levels override
  unsigned workers = 1;
};

// Throws ErrorCode::invalid_argument on alphas outside (1/2, 1), unsorted sizes,
// nonpositive seed counts or unknown measurement names.
void validate(const SweepConfig& config);

/// One measurement on one (alpha, n, replicate) cell. value is NaN and status
/// carries the error name when the cell failed.
struct SweepRow {
  int schema = sweep_schema_version;
  double alpha = 0.0;
  double C = 0.0;
  std::uint64_t n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string measurement;
  double value = 0.0;
  double aux = 0.0;
  std::uint64_t k = 0;
  std::string method;
  std::string status = "ok";
  double runtime_ms = 0.0;  // outside the determinism contract
};

std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Columns: schema,rng,alpha,C,n,replicate,seed,measurement,value,aux,k,method,status,runtime_ms
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool include_runtime = true);
// ErrorCode::format on a schema other than sweep_schema_version or a malformed row.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_exponent = 0.0;
  double r_squared = 0.0;
  double correction_power = 0.0;  // y divided by (ln n)^p before fitting
  std::size_t sizes = 0;
  std::size_t excluded = 0;       // nonpositive values dropped
};

struct FitRequest {
  std::string measurement;
  std::optional<double> alpha;  // all alphas when empty
  bool use_aux = false;         // fit the aux column instead of value
  double correction_power = 0.0;
  std::size_t min_sizes = 4;
  std::size_t min_seeds = 5;
};

/// OLS of ln(median y / (ln n)^p) on ln n across sizes; medians over seeds.
ScalingFit fit_exponent(const std::vector<SweepRow>& rows, const FitRequest& request);

// Plain OLS of ln y on ln x over given points (both positive); needs >= 2 points.
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double correction_power = 0.0);

struct PlotSpec {
  std::string title;
  std::string x_label = "n";
  std::string y_label;
  bool fit_line = true;
};

// Self-contained log-log SVG: scatter of (x, y) plus the OLS line when >= 2 points.
void emit_plot(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y, const PlotSpec& spec);
// Medians per n of a measurement from sweep rows.
void emit_plot(std::ostream& out, const std::vector<SweepRow>& rows, const FitRequest& request, const PlotSpec& spec);

}  // namespace hrg
