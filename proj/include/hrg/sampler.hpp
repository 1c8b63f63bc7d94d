#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hrg/geometry.hpp"
#include "hrg/rng.hpp"

namespace hrg {

struct PointSet {
  ModelParams params;
  std::vector<PolarPoint> points;

  std::size_t actual_count() const { return points.size(); }
};

// Exact Poisson draw: inversion below mean 30, PTRS transformed rejection above.
std::uint64_t poisson_draw(double mean, Rng& rng);

PointSet sample_uniform(const ModelParams& params, Rng& rng);
PointSet sample_poisson(const ModelParams& params, Rng& rng);

// Dispatches on params.mode with a generator seeded from params.seed.
PointSet sample_points(const ModelParams& params);

// Text format: header `hrg v1 alpha C n mode seed R`, then `index r theta` per point,
// all reals with 17 significant digits.
void write_point_header(std::ostream& out, const ModelParams& params);
void write_points(std::ostream& out, const PointSet& points);
PointSet read_points(std::istream& in);

std::string format_real(double value);

}  // namespace hrg
