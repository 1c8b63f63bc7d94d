#include "hrg/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "hrg/error.hpp"

namespace hrg {

namespace {

std::uint64_t poisson_inversion(double mean, Rng& rng) {
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson random variables".
std::uint64_t poisson_ptrs(double mean, Rng& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

PolarPoint draw_point(const DiskModel& disk, Rng& rng) {
  PolarPoint p;
  p.r = radius_from_uniform(rng.uniform(), disk);
  p.theta = kTwoPi * rng.uniform();
  if (p.theta >= kTwoPi) p.theta = 0.0;
  return p;
}

}  // namespace

std::uint64_t poisson_draw(double mean, Rng& rng) {
  require(std::isfinite(mean) && mean >= 0.0, ErrorCode::invalid_argument, "poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  return mean < 30.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

PointSet sample_uniform(const ModelParams& params, Rng& rng) {
  PointSet set{params, {}};
  const DiskModel disk = params.disk();
  set.points.reserve(params.n);
  for (std::uint64_t i = 0; i < params.n; ++i) set.points.push_back(draw_point(disk, rng));
  return set;
}

PointSet sample_poisson(const ModelParams& params, Rng& rng) {
  PointSet set{params, {}};
  const DiskModel disk = params.disk();
  const std::uint64_t count = poisson_draw(static_cast<double>(params.n), rng);
  set.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) set.points.push_back(draw_point(disk, rng));
  return set;
}

PointSet sample_points(const ModelParams& params) {
  Rng rng(params.seed);
  return params.mode == SamplingMode::uniform ? sample_uniform(params, rng) : sample_poisson(params, rng);
}

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_point_header(std::ostream& out, const ModelParams& params) {
  out << "hrg v1 " << format_real(params.alpha) << ' ' << format_real(params.C) << ' ' << params.n << ' '
      << to_string(params.mode) << ' ' << params.seed << ' ' << format_real(params.radius()) << '\n';
}

void write_points(std::ostream& out, const PointSet& set) {
  write_point_header(out, set.params);
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    out << i << ' ' << format_real(set.points[i].r) << ' ' << format_real(set.points[i].theta) << '\n';
  }
}

PointSet read_points(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::format, "missing point-set header");
  std::istringstream header(line);
  std::string magic, version, mode;
  double alpha = 0, C = 0, R = 0;
  std::uint64_t n = 0, seed = 0;
  header >> magic >> version >> alpha >> C >> n >> mode >> seed >> R;
  require(!header.fail() && magic == "hrg", ErrorCode::format, "malformed point-set header");
  require(version == "v1", ErrorCode::format, "unsupported point-set version");
  PointSet set{ModelParams::make(alpha, C, n, parse_sampling_mode(mode), seed), {}};

  while (in.peek() != EOF && in.peek() != 'e') {
    if (!std::getline(in, line)) break;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t index = 0;
    PolarPoint p;
    row >> index >> p.r >> p.theta;
    require(!row.fail(), ErrorCode::format, "malformed point line");
    require(index == set.points.size(), ErrorCode::format, "point indices must be consecutive");
    set.points.push_back(p);
  }
  return set;
}

}  // namespace hrg
