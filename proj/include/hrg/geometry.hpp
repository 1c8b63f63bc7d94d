#pragma once

#include <cstdint>
#include <numbers>
#include <string>

namespace hrg {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A point of the disk in native representation: r is the hyperbolic distance to
// the origin, theta the angle in [0, 2pi).
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

enum class SamplingMode { uniform, poisson };

const char* to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(const std::string& text);

// The two numbers every measure and threshold depends on.
struct DiskModel {
  double alpha = 0.75;
  double R = 0.0;
};

/// Parameters of Unf_{alpha,C}(n) / Poi_{alpha,C}(n). Construct through make(),
/// which enforces 1/2 < alpha < 1, n >= 2 and a positive disk radius.
struct ModelParams {
  double alpha = 0.75;
  double C = 0.0;
  std::uint64_t n = 2;
  SamplingMode mode = SamplingMode::uniform;
  std::uint64_t seed = 0;

  static ModelParams make(double alpha, double C, std::uint64_t n,
                          SamplingMode mode = SamplingMode::uniform, std::uint64_t seed = 0);

  double radius() const;  // R = 2 ln n + C
  DiskModel disk() const { return {alpha, radius()}; }
};

// Slack terms nu (band-size window) and nu' (layer offsets).
struct Slack {
  double nu = 0.0;
  double nu_prime = 0.0;
};

/// nu' = 2 ln R + ln ln R, nu = (1/alpha) ln R + ln ln R. The ln ln R term is
/// dropped when R <= e, where it would be negative or undefined.
Slack default_slack(const DiskModel& disk);

struct Levels {
  double R = 0.0;
  int ell_low = 0;
  int ell_min = 0;
  int ell_mid = 0;
  int ell_max = 0;
  int ell_bdr = 0;
  double nu = 0.0;
  double nu_prime = 0.0;

  // Empty when ell_min < ell_mid < ell_max and ell_min < ell_low + nu < ell_mid,
  // otherwise the first violated inequality.
  std::string violation() const;
  bool ordered() const { return violation().empty(); }
};

// Layer radii without the ordering check; used wherever small graphs still need
// a layer structure (degenerate levels only weaken, never invalidate, a flow).
Levels compute_levels(const DiskModel& disk, const Slack& slack);

// Throws ErrorCode::degenerate_levels naming the violated inequality.
Levels derive_levels(const ModelParams& params);
Levels derive_levels(const DiskModel& disk, const Slack& slack);

// l~ : the band that hosts the first internal vertex of a length-3 path leaving band ell.
int tilde_level(int ell, const Levels& levels);

// Band index of a radius: r in (ell-1, ell] belongs to ell; r = 0 belongs to band 1.
int band_of(double r);

// Small relative angle in [0, pi].
double angular_distance(double theta_a, double theta_b);

// Wraps any finite angle into [0, 2pi).
double normalize_angle(double theta);

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q);

/// Angle at the origin of the triangle with sides d1, d2 adjacent to it and d
/// opposite. Returns pi when d >= d1 + d2 and 0 when d <= |d1 - d2| (this also
/// covers d1 = 0 or d2 = 0). Symmetric in (d1, d2) bit for bit.
double angle_threshold(double d, double d1, double d2);

// 2 exp((d - d1 - d2) / 2); no domain clamping.
double angle_threshold_approx(double d, double d1, double d2);

// Edge rule: d_h(u, v) <= R, decided by the angle comparison when r_u + r_v > R.
bool edge_predicate(const PolarPoint& u, const PolarPoint& v, double R);

// mu(B_O(rho)) = (cosh(alpha rho) - 1) / (cosh(alpha R) - 1), overflow-free.
double ball_measure_exact(double rho, const DiskModel& disk);

// e^{-alpha (R - rho)}
double ball_measure_asymptotic(double rho, const DiskModel& disk);

// C_alpha = 2 alpha / (pi (alpha - 1/2))
double c_alpha(double alpha);

// C_alpha exp(-alpha (R - rho_O) - (rho_O - rho_p + r_p) / 2); requires
// r_p <= rho_p and rho_O + r_p >= rho_p.
double ball_intersection_measure(double r_p, double rho_p, double rho_O, const DiskModel& disk);

// Monte-Carlo estimate of mu(B_p(rho_p) ∩ B_O(rho_O)) for p = (r_p, 0).
double ball_intersection_monte_carlo(double r_p, double rho_p, double rho_O, const DiskModel& disk,
                                     std::uint64_t samples, std::uint64_t seed);

// mu(B_O(rho_out) \ B_O(rho_in)); requires 0 <= rho_in <= rho_out <= R.
double annulus_measure(double rho_out, double rho_in, const DiskModel& disk);

// e^{-alpha (R - rho_out)} (1 - e^{-alpha (rho_out - rho_in)})
double annulus_measure_asymptotic(double rho_out, double rho_in, const DiskModel& disk);

// Inverse of the radial CDF: u in [0,1) maps to r in [0, R).
double radius_from_uniform(double u, const DiskModel& disk);

}  // namespace hrg
