#include "hrg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

namespace hrg {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Tolerance for arguments of asin/acosh that rounding pushed past the domain.
constexpr double kClampTolerance = 1e-12;

double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - kLn2; }

double log_cosh(double x) {
  x = std::fabs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - kLn2;
}

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::uniform ? "uniform" : "poisson";
}

SamplingMode parse_sampling_mode(const std::string& text) {
  if (text == "uniform") return SamplingMode::uniform;
  if (text == "poisson") return SamplingMode::poisson;
  fail(ErrorCode::invalid_argument, "unknown sampling mode '" + text + "'");
}

ModelParams ModelParams::make(double alpha, double C, std::uint64_t n, SamplingMode mode,
                              std::uint64_t seed) {
  require(std::isfinite(alpha) && alpha > 0.5 && alpha < 1.0, ErrorCode::invalid_argument,
          "alpha must lie in (1/2, 1)");
  require(std::isfinite(C), ErrorCode::invalid_argument, "C must be finite");
  require(n >= 2, ErrorCode::invalid_argument, "n must be at least 2");
  ModelParams params{alpha, C, n, mode, seed};
  require(params.radius() > 0.0, ErrorCode::invalid_argument, "disk radius 2 ln n + C must be positive");
  return params;
}

double ModelParams::radius() const { return 2.0 * std::log(static_cast<double>(n)) + C; }

Slack default_slack(const DiskModel& disk) {
  const double log_r = std::log(disk.R);
  const double log_log_r = disk.R > std::numbers::e ? std::log(log_r) : 0.0;
  return {log_r / disk.alpha + log_log_r, 2.0 * log_r + log_log_r};
}

std::string Levels::violation() const {
  std::ostringstream out;
  if (!(ell_min < ell_mid)) {
    out << "ell_min < ell_mid fails (" << ell_min << " >= " << ell_mid << ")";
  } else if (!(ell_mid < ell_max)) {
    out << "ell_mid < ell_max fails (" << ell_mid << " >= " << ell_max << ")";
  } else if (!(ell_min < ell_low + nu)) {
    out << "ell_min < ell_low + nu fails (" << ell_min << " >= " << ell_low + nu << ")";
  } else if (!(ell_low + nu < ell_mid)) {
    out << "ell_low + nu < ell_mid fails (" << ell_low + nu << " >= " << ell_mid << ")";
  }
  return out.str();
}

Levels compute_levels(const DiskModel& disk, const Slack& slack) {
  const double R = disk.R;
  const double a = disk.alpha;
  Levels levels;
  levels.R = R;
  levels.nu = slack.nu;
  levels.nu_prime = slack.nu_prime;
  levels.ell_low = static_cast<int>(std::floor((1.0 - 1.0 / (2.0 * a)) * R));
  levels.ell_min = static_cast<int>(std::ceil((a - 0.5) * R + slack.nu_prime));
  levels.ell_mid = static_cast<int>(std::floor(R / 2.0));
  levels.ell_max = static_cast<int>(std::floor((1.5 - a) * R - slack.nu_prime));
  levels.ell_bdr = static_cast<int>(std::floor(R - 2.0 * std::log(R) / (1.0 - a)));
  return levels;
}

Levels derive_levels(const DiskModel& disk, const Slack& slack) {
  Levels levels = compute_levels(disk, slack);
  if (auto why = levels.violation(); !why.empty()) {
    fail(ErrorCode::degenerate_levels, "degenerate levels at R = " + std::to_string(disk.R) + ": " + why);
  }
  return levels;
}

Levels derive_levels(const ModelParams& params) {
  const DiskModel disk = params.disk();
  return derive_levels(disk, default_slack(disk));
}

int tilde_level(int ell, const Levels& levels) {
  if (ell > levels.ell_max) {
    fail(ErrorCode::domain, "tilde_level: ell = " + std::to_string(ell) + " exceeds ell_max = " +
                                std::to_string(levels.ell_max));
  }
  if (ell < levels.ell_min) return levels.ell_max;
  if (ell <= levels.ell_mid) return 2 * levels.ell_mid - ell + 1;
  return levels.ell_mid;
}

int band_of(double r) { return std::max(1, static_cast<int>(std::ceil(r))); }

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angular_distance(double theta_a, double theta_b) {
  const double d = std::fabs(theta_a - theta_b);
  return d > std::numbers::pi ? kTwoPi - d : d;
}

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q) {
  // cosh d = cosh(r - r') + 2 sinh r sinh r' sin^2(dtheta / 2), the cancellation-free
  // rewrite of the hyperbolic law of cosines.
  const double dr = std::fabs(p.r - q.r);
  const double half_sin = std::sin(angular_distance(p.theta, q.theta) / 2.0);
  if (p.r + q.r < 600.0) {
    const double x = std::cosh(dr) + 2.0 * std::sinh(p.r) * std::sinh(q.r) * half_sin * half_sin;
    return std::acosh(std::max(1.0, x));
  }
  double log_x = log_cosh(dr);
  if (half_sin > 0.0 && p.r > 0.0 && q.r > 0.0) {
    log_x = log_add_exp(log_x, kLn2 + log_sinh(p.r) + log_sinh(q.r) + 2.0 * std::log(half_sin));
  }
  return log_x + std::log1p(std::sqrt(-std::expm1(-2.0 * log_x)));
}

double angle_threshold(double d, double d1, double d2) {
  const double lo = std::min(d1, d2);
  const double hi = std::max(d1, d2);
  if (d >= lo + hi) return std::numbers::pi;
  if (d <= hi - lo) return 0.0;
  // sin^2(theta/2) = sinh((d + hi - lo)/2) sinh((d - hi + lo)/2) / (sinh lo sinh hi)
  const double a = (d + (hi - lo)) / 2.0;
  const double b = (d - (hi - lo)) / 2.0;
  double s2;
  if (hi < 300.0) {
    s2 = std::sinh(a) * std::sinh(b) / (std::sinh(lo) * std::sinh(hi));
  } else {
    s2 = std::exp(log_sinh(a) + log_sinh(b) - log_sinh(lo) - log_sinh(hi));
  }
  if (s2 > 1.0 + kClampTolerance) {
    fail(ErrorCode::internal, "angle_threshold: sin^2 argument out of range");
  }
  return 2.0 * std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0)));
}

double angle_threshold_approx(double d, double d1, double d2) {
  return 2.0 * std::exp((d - d1 - d2) / 2.0);
}

bool edge_predicate(const PolarPoint& u, const PolarPoint& v, double R) {
  if (u.r + v.r <= R) return true;
  return angular_distance(u.theta, v.theta) <= angle_threshold(R, u.r, v.r);
}

double ball_measure_exact(double rho, const DiskModel& disk) {
  if (!(rho >= 0.0 && rho <= disk.R)) {
    fail(ErrorCode::domain, "ball_measure_exact: rho outside [0, R]");
  }
  // ((cosh(a rho) - 1) / (cosh(a R) - 1)) = (sinh(a rho / 2) / sinh(a R / 2))^2
  const double a = disk.alpha;
  const double ratio = std::expm1(-a * rho) / std::expm1(-a * disk.R);
  return std::exp(a * (rho - disk.R)) * ratio * ratio;
}

double ball_measure_asymptotic(double rho, const DiskModel& disk) {
  return std::exp(-disk.alpha * (disk.R - rho));
}

double c_alpha(double alpha) { return 2.0 * alpha / (std::numbers::pi * (alpha - 0.5)); }

double ball_intersection_measure(double r_p, double rho_p, double rho_O, const DiskModel& disk) {
  if (!(r_p <= rho_p && rho_O + r_p >= rho_p)) {
    fail(ErrorCode::domain, "ball_intersection_measure: requires r_p <= rho_p and rho_O + r_p >= rho_p");
  }
  return c_alpha(disk.alpha) *
         std::exp(-disk.alpha * (disk.R - rho_O) - 0.5 * (rho_O - rho_p + r_p));
}

double ball_intersection_monte_carlo(double r_p, double rho_p, double rho_O, const DiskModel& disk,
                                     std::uint64_t samples, std::uint64_t seed) {
  require(samples > 0, ErrorCode::invalid_argument, "monte carlo needs at least one sample");
  Rng rng(seed);
  const PolarPoint p{r_p, 0.0};
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const PolarPoint q{radius_from_uniform(rng.uniform(), disk), kTwoPi * rng.uniform()};
    if (q.r <= rho_O && hyperbolic_distance(p, q) <= rho_p) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

double annulus_measure(double rho_out, double rho_in, const DiskModel& disk) {
  if (!(rho_in >= 0.0 && rho_in <= rho_out && rho_out <= disk.R)) {
    fail(ErrorCode::domain, "annulus_measure: requires 0 <= rho_in <= rho_out <= R");
  }
  return ball_measure_exact(rho_out, disk) - ball_measure_exact(rho_in, disk);
}

double annulus_measure_asymptotic(double rho_out, double rho_in, const DiskModel& disk) {
  return std::exp(-disk.alpha * (disk.R - rho_out)) * -std::expm1(-disk.alpha * (rho_out - rho_in));
}

double radius_from_uniform(double u, const DiskModel& disk) {
  // Inverts (cosh(a r) - 1)/(cosh(a R) - 1) = u via sinh(a r / 2) = sqrt(u) sinh(a R / 2).
  const double a = disk.alpha;
  const double half = a * disk.R / 2.0;
  double r;
  if (half < 300.0) {
    r = 2.0 / a * std::asinh(std::sqrt(u) * std::sinh(half));
  } else {
    r = 2.0 / a * (kLn2 + 0.5 * std::log(u) + log_sinh(half));
  }
  if (!(r < disk.R)) r = std::nextafter(disk.R, 0.0);
  return std::max(0.0, r);
}

}  // namespace hrg
