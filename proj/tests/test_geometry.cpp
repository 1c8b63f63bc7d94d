#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrg/error.hpp"
#include "hrg/geometry.hpp"
#include "hrg/rng.hpp"

using namespace hrg;

namespace {

constexpr double kPi = std::numbers::pi;

// Textbook law of cosines in extended precision; fine for moderate radii.
double distance_oracle(const PolarPoint& p, const PolarPoint& q) {
  const long double x = std::cosh(static_cast<long double>(p.r)) * std::cosh(static_cast<long double>(q.r)) -
                        std::sinh(static_cast<long double>(p.r)) * std::sinh(static_cast<long double>(q.r)) *
                            std::cos(static_cast<long double>(p.theta - q.theta));
  return static_cast<double>(std::acosh(std::max(1.0L, x)));
}

double angle_oracle(double d, double d1, double d2) {
  const long double c = (std::cosh(static_cast<long double>(d1)) * std::cosh(static_cast<long double>(d2)) -
                         std::cosh(static_cast<long double>(d))) /
                        (std::sinh(static_cast<long double>(d1)) * std::sinh(static_cast<long double>(d2)));
  return static_cast<double>(std::acos(std::clamp(c, -1.0L, 1.0L)));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("hyperbolic distance special configurations") {
  CHECK(hyperbolic_distance({3.0, 1.0}, {3.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hyperbolic_distance({2.0, 0.5}, {7.5, 0.5}) == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(hyperbolic_distance({2.0, 0.0}, {7.5, kPi}) == doctest::Approx(9.5).epsilon(1e-12));
  CHECK(hyperbolic_distance({0.0, 0.0}, {4.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance matches the law of cosines, is symmetric and satisfies the triangle inequality") {
  Rng rng(11);
  for (int i = 0; i < 20000; ++i) {
    const PolarPoint p{10.0 * rng.uniform(), kTwoPi * rng.uniform()};
    const PolarPoint q{10.0 * rng.uniform(), kTwoPi * rng.uniform()};
    const PolarPoint o{10.0 * rng.uniform(), kTwoPi * rng.uniform()};
    const double d = hyperbolic_distance(p, q);
    CHECK(d == hyperbolic_distance(q, p));
    CHECK(d <= hyperbolic_distance(p, o) + hyperbolic_distance(o, q) + 1e-9);
    if (distance_oracle(p, q) > 1e-3) CHECK(d == doctest::Approx(distance_oracle(p, q)).epsilon(1e-9));
  }
}

TEST_CASE("hyperbolic distance survives radii where cosh overflows") {
  const double d = hyperbolic_distance({400.0, 0.0}, {400.0, kPi});
  CHECK(d == doctest::Approx(800.0).epsilon(1e-12));
  const double e = hyperbolic_distance({400.0, 0.0}, {400.0, 1e-3});
  // 2 sinh^2(400) sin^2(5e-4) dominates: d ~ 800 + 2 ln(sin(5e-4)).
  CHECK(e == doctest::Approx(800.0 + 2.0 * std::log(std::sin(5e-4))).epsilon(1e-9));
}

TEST_CASE("angle threshold endpoints and symmetry") {
  CHECK(angle_threshold(12.0, 5.0, 7.0) == kPi);
  CHECK(angle_threshold(2.0, 5.0, 7.0) == 0.0);
  CHECK(angle_threshold(1.0, 0.0, 3.0) == 0.0);
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const double d1 = 15.0 * rng.uniform(), d2 = 15.0 * rng.uniform(), d = 20.0 * rng.uniform();
    CHECK(angle_threshold(d, d1, d2) == angle_threshold(d, d2, d1));
  }
}

TEST_CASE("angle threshold agrees with the arccos formula") {
  Rng rng(6);
  for (int i = 0; i < 5000; ++i) {
    const double d1 = 0.5 + 8.0 * rng.uniform(), d2 = 0.5 + 8.0 * rng.uniform();
    const double lo = std::fabs(d1 - d2), hi = d1 + d2;
    const double d = lo + (hi - lo) * (0.05 + 0.9 * rng.uniform());
    CHECK(angle_threshold(d, d1, d2) == doctest::Approx(angle_oracle(d, d1, d2)).epsilon(1e-8));
  }
}

TEST_CASE("angle threshold against the exponential approximation") {
  // R = 20, d1 = d2 = 12: the approximation is within the Theta(e^{d - d1 - d2}) band.
  const double exact = angle_threshold(20.0, 12.0, 12.0);
  const double approx = angle_threshold_approx(20.0, 12.0, 12.0);
  CHECK(std::fabs(exact - approx) / exact < 0.25);
  CHECK(approx == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(angle_threshold_approx(9.0, 4.0, 5.0) == 2.0);
  CHECK(angle_threshold_approx(20.0, 10.0, 10.0) == 2.0);
  CHECK(angle_threshold_approx(20.0, 11.0, 13.0) == doctest::Approx(0.2706705664732254).epsilon(1e-14));
}

TEST_CASE("angle threshold increases with d") {
  const double d1 = 9.0, d2 = 11.0;
  double previous = 0.0;
  for (double d = 2.0; d <= 20.0; d += 0.01) {
    const double a = angle_threshold(d, d1, d2);
    CHECK(a >= previous);
    previous = a;
  }
  for (double d = 2.0; d < 20.0; d += 0.5) {
    CHECK(angle_threshold_approx(d + 0.5, d1, d2) > angle_threshold_approx(d, d1, d2));
  }
}

TEST_CASE("threshold duality between distance and angle") {
  const double R = 18.0;
  Rng rng(21);
  int checked = 0;
  for (int i = 0; i < 50000; ++i) {
    const PolarPoint u{R * rng.uniform(), kTwoPi * rng.uniform()};
    const PolarPoint v{R * rng.uniform(), kTwoPi * rng.uniform()};
    const bool close = hyperbolic_distance(u, v) <= R;
    if (u.r + v.r <= R) {
      CHECK(close);
      CHECK(edge_predicate(u, v, R));
      continue;
    }
    const double gap = angular_distance(u.theta, v.theta);
    const double threshold = angle_threshold(R, u.r, v.r);
    if (std::fabs(gap - threshold) < 1e-12) continue;
    CHECK(close == (gap <= threshold));
    CHECK(edge_predicate(u, v, R) == close);
    ++checked;
  }
  CHECK(checked > 10000);
}

TEST_CASE("ball measure") {
  const DiskModel disk{0.75, 20.0};
  CHECK(ball_measure_exact(0.0, disk) == 0.0);
  CHECK(std::fabs(ball_measure_exact(disk.R, disk) - 1.0) < 1e-12);
  const double v = ball_measure_exact(disk.R - 5.0, disk);
  CHECK(v / std::exp(-0.75 * 5.0) == doctest::Approx(1.0).epsilon(0.05));
  // Direct closed form at a radius where it is numerically benign.
  const DiskModel small{0.6, 6.0};
  for (double rho = 0.25; rho < 6.0; rho += 0.25) {
    const double direct = (std::cosh(0.6 * rho) - 1.0) / (std::cosh(0.6 * 6.0) - 1.0);
    CHECK(ball_measure_exact(rho, small) == doctest::Approx(direct).epsilon(1e-12));
  }
  double previous = -1.0;
  for (double rho = 0.0; rho <= disk.R; rho += 0.05) {
    const double m = ball_measure_exact(rho, disk);
    CHECK(m > previous);
    previous = m;
  }
  CHECK(code_of([&] { ball_measure_exact(-0.1, disk); }) == ErrorCode::domain);
  CHECK(code_of([&] { ball_measure_exact(20.5, disk); }) == ErrorCode::domain);
  CHECK(ball_measure_asymptotic(15.0, disk) == doctest::Approx(std::exp(-3.75)));
}

TEST_CASE("ball intersection measure") {
  CHECK(c_alpha(0.75) == doctest::Approx(6.0 / kPi).epsilon(1e-15));
  CHECK(c_alpha(0.75) == doctest::Approx(1.90986).epsilon(1e-5));
  const DiskModel disk{0.75, 20.0};
  // Concentric case against the exact CDF.
  const double mc0 = ball_intersection_monte_carlo(0.0, 15.0, 15.0, disk, 200000, 3);
  const double exact0 = ball_measure_exact(15.0, disk);
  CHECK(std::fabs(mc0 - exact0) < 4.0 * std::sqrt(exact0 / 200000.0));
  // r_p = R/2 against a million Monte-Carlo samples.
  const double mc = ball_intersection_monte_carlo(10.0, 20.0, 20.0, disk, 1000000, 4);
  const double asym = ball_intersection_measure(10.0, 20.0, 20.0, disk);
  CHECK(std::fabs(asym - mc) / mc < 0.10);
  CHECK(code_of([&] { ball_intersection_measure(5.0, 4.0, 10.0, disk); }) == ErrorCode::domain);
  CHECK(code_of([&] { ball_intersection_measure(1.0, 10.0, 5.0, disk); }) == ErrorCode::domain);
}

TEST_CASE("annulus measure") {
  const DiskModel disk{0.7, 30.0};
  CHECK(annulus_measure(12.0, 12.0, disk) == 0.0);
  CHECK(annulus_measure(30.0, 0.0, disk) == doctest::Approx(1.0).epsilon(1e-12));
  const double exact = annulus_measure(28.0, 27.0, disk);
  const double asym = annulus_measure_asymptotic(28.0, 27.0, disk);
  CHECK(std::fabs(exact - asym) / exact < 0.10);
  CHECK(code_of([&] { annulus_measure(5.0, 6.0, disk); }) == ErrorCode::domain);
  CHECK(code_of([&] { annulus_measure(31.0, 6.0, disk); }) == ErrorCode::domain);
}

TEST_CASE("model parameters and radius") {
  CHECK(ModelParams::make(0.75, 0.0, 10000).radius() == doctest::Approx(8.0 * std::log(10.0)).epsilon(1e-15));
  CHECK(ModelParams::make(0.75, 0.0, 10000).radius() == doctest::Approx(18.42).epsilon(1e-3));
  CHECK(code_of([] { ModelParams::make(0.5, 0.0, 100); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ModelParams::make(1.0, 0.0, 100); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ModelParams::make(0.75, 0.0, 1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ModelParams::make(0.75, 0.0, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("levels") {
  const auto mid = compute_levels(ModelParams::make(0.75, 0.0, 1000000).disk(),
                                  default_slack(ModelParams::make(0.75, 0.0, 1000000).disk()));
  CHECK(mid.ell_mid == 13);

  for (std::uint64_t n : {100ull, 10000ull, 1000000ull, 1000000000ull, 1000000000000ull}) {
    for (double alpha : {0.55, 0.75, 0.95}) {
      const DiskModel disk = ModelParams::make(alpha, 0.0, n).disk();
      const Levels L = compute_levels(disk, default_slack(disk));
      const double sum = L.ell_min + L.ell_max;
      CHECK(sum > disk.R - 1.0);
      CHECK(sum < disk.R + 1.0);
    }
  }

  const Slack s = default_slack({0.75, 40.0});
  CHECK(s.nu_prime == doctest::Approx(2.0 * std::log(40.0) + std::log(std::log(40.0))));
  CHECK(s.nu == doctest::Approx(std::log(40.0) / 0.75 + std::log(std::log(40.0))));
  CHECK(default_slack({0.75, 2.0}).nu_prime == doctest::Approx(2.0 * std::log(2.0)));

  try {
    derive_levels(ModelParams::make(0.75, 0.0, 10000));
    FAIL("expected degenerate levels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_levels);
    CHECK(std::string(e.what()).find("ell_min < ell_mid") != std::string::npos);
  }
  const Levels L = derive_levels(ModelParams::make(0.75, 0.0, 1000000000000ull));
  CHECK(L.ell_min < L.ell_mid);
  CHECK(L.ell_mid < L.ell_max);
}

TEST_CASE("tilde level") {
  const Levels L = derive_levels(ModelParams::make(0.75, 0.0, 1000000000000ull));
  CHECK(tilde_level(L.ell_mid, L) == L.ell_mid + 1);
  CHECK(tilde_level(L.ell_mid + 1, L) == L.ell_mid);
  CHECK(tilde_level(L.ell_min - 1, L) == L.ell_max);
  CHECK(code_of([&] { tilde_level(L.ell_max + 1, L); }) == ErrorCode::domain);
  for (int ell = L.ell_min; ell <= L.ell_max; ++ell) {
    const int t = tilde_level(ell, L);
    CHECK((ell <= L.ell_mid) == (t > L.ell_mid));
    if (ell <= L.ell_mid) CHECK(t <= L.ell_max);
  }
}

TEST_CASE("bands and angles") {
  CHECK(band_of(0.0) == 1);
  CHECK(band_of(0.3) == 1);
  CHECK(band_of(1.0) == 1);
  CHECK(band_of(1.0000001) == 2);
  CHECK(band_of(7.0) == 7);
  CHECK(normalize_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(normalize_angle(kTwoPi) == 0.0);
  CHECK(angular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(radius_from_uniform(0.0, {0.75, 20.0}) == 0.0);
  CHECK(radius_from_uniform(0.999999999, {0.75, 20.0}) < 20.0);
}
