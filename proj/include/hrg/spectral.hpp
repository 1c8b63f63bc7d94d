#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hrg/components.hpp"

namespace hrg {

enum class SpectralMethod { power, lanczos, dense };

const char* to_string(SpectralMethod method);

struct SpectralOptions {
  double tol = 1e-8;        // on ||L x - lambda1 x||_2, unit x
  int max_iter = 20'000;    // operator applications
  int power_iterations = 200;
  int basis_size = 48;      // Krylov basis before a thick restart
  int retained = 16;        // Ritz vectors kept across a restart
  std::uint64_t seed = 0x5eed;
};

struct SpectralResult {
  double lambda1 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  SpectralMethod method = SpectralMethod::lanczos;
  double orthogonality_drift = 0.0;  // |<x, D^{1/2} 1>| / ||D^{1/2} 1||
  std::vector<double> eigenvector;   // unit eigenvector of L for lambda1
};

// y = D^{-1/2} A D^{-1/2} x, edge by edge.
void normalized_operator_apply(const ComponentView& h, std::span<const double> x, std::span<double> y);

// D^{1/2} 1 / ||D^{1/2} 1||, the eigenvector of L for eigenvalue 0.
std::vector<double> stationary_vector(const ComponentView& h);

/// lambda1 = 1 - mu2, mu2 the second-largest eigenvalue of D^{-1/2} A D^{-1/2}.
/// Power iteration on (B + I)/2 deflated against the stationary vector; if that
/// stalls, thick-restart Lanczos with full reorthogonalization takes over from
/// the power iterate. Throws NotConverged with the best iterate otherwise.
SpectralResult spectral_gap(const ComponentView& h, const SpectralOptions& options = {});
SpectralResult spectral_gap(const ComponentView& h, double tol, int max_iter);

// Cyclic Jacobi on the dense normalized Laplacian; ascending eigenvalues.
inline constexpr std::size_t dense_spectrum_limit = 512;
std::vector<double> dense_spectrum(const ComponentView& h);

// Same gap computed through P = D^{-1} A conjugated by D^{1/2}.
double random_walk_matrix_gap(const ComponentView& h, double tol = 1e-11);

}  // namespace hrg
