#include "hrg/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

namespace hrg {

namespace {

using Apply = std::function<void(std::span<const double>, std::span<double>)>;
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<double> x, double alpha) {
  for (double& v : x) v *= alpha;
}

double residual_norm(std::span<const double> bx, std::span<const double> x, double theta) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = bx[i] - theta * x[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vec random_unit(std::size_t k, Rng& rng, std::span<const double> top) {
  Vec x(k);
  for (double& v : x) v = rng.uniform() - 0.5;
  axpy(-dot(x, top), top, x);
  scale(x, 1.0 / norm(x));
  return x;
}

class SecondEigenSolver {
 public:
  SecondEigenSolver(Apply apply, std::span<const double> top, const SpectralOptions& options)
      : apply_(std::move(apply)), top_(top.begin(), top.end()), options_(options), k_(top.size()) {}

  SpectralResult run() {
    Rng rng(options_.seed);
    Vec x = random_unit(k_, rng, top_);
    Vec y(k_);

    // Phase 1: power iteration on (B + I)/2 restricted to the complement of the top vector.
    const int power_budget = std::min(options_.power_iterations, options_.max_iter);
    for (int it = 0; it < power_budget; ++it) {
      apply_(x, y);
      ++applications_;
      const double theta = dot(x, y);
      const double res = residual_norm(y, x, theta);
      note_best(theta, res);
      if (res <= options_.tol) return finish(std::move(x), SpectralMethod::power);
      for (std::size_t i = 0; i < k_; ++i) y[i] = 0.5 * (y[i] + x[i]);
      reorthogonalize(y);
      const double ny = norm(y);
      if (ny == 0.0) break;
      scale(y, 1.0 / ny);
      std::swap(x, y);
    }

    if (applications_ >= options_.max_iter) {
      throw NotConverged("spectral_gap: no convergence within " + std::to_string(options_.max_iter) +
                             " operator applications",
                         1.0 - best_theta_, best_residual_, applications_);
    }
    // Phase 2: thick-restart Lanczos seeded with the power iterate.
    return lanczos(std::move(x), rng);
  }

 private:
  SpectralResult lanczos(Vec start, Rng& rng) {
    const std::size_t dim_cap = std::min<std::size_t>(static_cast<std::size_t>(options_.basis_size), k_ - 1);
    std::vector<Vec> V, W;
    Eigen::MatrixXd H(0, 0);

    auto add = [&](Vec v) {
      Vec w(k_);
      apply_(v, w);
      ++applications_;
      V.push_back(std::move(v));
      W.push_back(std::move(w));
      const auto p = static_cast<Eigen::Index>(V.size());
      H.conservativeResize(p, p);
      for (Eigen::Index i = 0; i < p; ++i) {
        const double hij = dot(V[static_cast<std::size_t>(i)], W.back());
        H(i, p - 1) = hij;
        H(p - 1, i) = hij;
      }
    };

    reorthogonalize(start);
    scale(start, 1.0 / norm(start));
    add(std::move(start));

    Vec x(k_), bx(k_);
    for (;;) {
      const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hs);
      const auto p = static_cast<Eigen::Index>(V.size());
      const double theta = eig.eigenvalues()(p - 1);
      const Eigen::VectorXd coef = eig.eigenvectors().col(p - 1);
      std::fill(x.begin(), x.end(), 0.0);
      std::fill(bx.begin(), bx.end(), 0.0);
      for (Eigen::Index i = 0; i < p; ++i) {
        axpy(coef(i), V[static_cast<std::size_t>(i)], x);
        axpy(coef(i), W[static_cast<std::size_t>(i)], bx);
      }
      const double res = residual_norm(bx, x, theta);
      note_best(theta, res);
      if (res <= options_.tol || static_cast<std::size_t>(p) >= k_ - 1) {
        return finish(x, SpectralMethod::lanczos);
      }
      if (applications_ >= options_.max_iter) {
        throw NotConverged("spectral_gap: no convergence within " + std::to_string(options_.max_iter) +
                               " operator applications",
                           1.0 - best_theta_, best_residual_, applications_);
      }

      if (static_cast<std::size_t>(p) >= dim_cap) {
        // Keep the top Ritz vectors, largest last so the expansion continues its Krylov sequence.
        const Eigen::Index keep = std::min<Eigen::Index>(options_.retained, p - 1);
        std::vector<Vec> V2, W2;
        for (Eigen::Index j = p - keep; j < p; ++j) {
          Vec v(k_, 0.0), w(k_, 0.0);
          for (Eigen::Index i = 0; i < p; ++i) {
            axpy(eig.eigenvectors()(i, j), V[static_cast<std::size_t>(i)], v);
            axpy(eig.eigenvectors()(i, j), W[static_cast<std::size_t>(i)], w);
          }
          V2.push_back(std::move(v));
          W2.push_back(std::move(w));
        }
        V = std::move(V2);
        W = std::move(W2);
        H = Eigen::MatrixXd::Zero(keep, keep);
        for (Eigen::Index i = 0; i < keep; ++i) {
          for (Eigen::Index j = 0; j < keep; ++j) {
            H(i, j) = dot(V[static_cast<std::size_t>(i)], W[static_cast<std::size_t>(j)]);
          }
        }
      }

      Vec c = W.back();
      const double before = norm(c);
      orthogonalize(c, V);
      double nc = norm(c);
      if (nc <= 1e-10 * std::max(before, 1.0)) {
        // Invariant subspace; continue from a fresh direction.
        c = random_unit(k_, rng, top_);
        orthogonalize(c, V);
        nc = norm(c);
        if (nc <= 1e-12) return finish(x, SpectralMethod::lanczos);
      }
      scale(c, 1.0 / nc);
      add(std::move(c));
    }
  }

  void reorthogonalize(std::span<double> v) const {
    for (int pass = 0; pass < 2; ++pass) axpy(-dot(v, top_), top_, v);
  }

  void orthogonalize(Vec& c, const std::vector<Vec>& basis) const {
    for (int pass = 0; pass < 2; ++pass) {
      axpy(-dot(c, top_), top_, c);
      for (const auto& v : basis) axpy(-dot(c, v), v, c);
    }
  }

  void note_best(double theta, double residual) {
    if (residual < best_residual_) {
      best_residual_ = residual;
      best_theta_ = theta;
    }
  }

  SpectralResult finish(Vec x, SpectralMethod method) {
    reorthogonalize(x);
    scale(x, 1.0 / norm(x));
    Vec y(k_);
    apply_(x, y);
    ++applications_;
    const double theta = dot(x, y);
    SpectralResult result;
    result.lambda1 = 1.0 - theta;
    result.residual = residual_norm(y, x, theta);
    result.iterations = applications_;
    result.method = method;
    result.orthogonality_drift = std::fabs(dot(x, top_));
    result.eigenvector = std::move(x);
    return result;
  }

  Apply apply_;
  Vec top_;
  SpectralOptions options_;
  std::size_t k_;
  int applications_ = 0;
  double best_theta_ = 0.0;
  double best_residual_ = std::numeric_limits<double>::infinity();
};

void require_gap_input(const ComponentView& h) {
  require(h.size() >= 2, ErrorCode::invalid_argument, "spectral gap needs a component with at least 2 vertices");
}

}  // namespace

const char* to_string(SpectralMethod method) {
  switch (method) {
    case SpectralMethod::power: return "power";
    case SpectralMethod::lanczos: return "lanczos";
    case SpectralMethod::dense: return "dense";
  }
  return "unknown";
}

void normalized_operator_apply(const ComponentView& h, std::span<const double> x, std::span<double> y) {
  const std::size_t k = h.size();
  require(x.size() == k && y.size() == k, ErrorCode::invalid_argument, "operator dimension mismatch");
  thread_local std::vector<double> scaled;
  scaled.resize(k);
  for (VertexId v = 0; v < k; ++v) scaled[v] = x[v] / std::sqrt(static_cast<double>(h.degree(v)));
  for (VertexId u = 0; u < k; ++u) {
    double s = 0.0;
    for (VertexId w : h.neighbors(u)) s += scaled[w];
    y[u] = s / std::sqrt(static_cast<double>(h.degree(u)));
  }
}

std::vector<double> stationary_vector(const ComponentView& h) {
  std::vector<double> z(h.size());
  for (VertexId v = 0; v < h.size(); ++v) z[v] = std::sqrt(static_cast<double>(h.degree(v)));
  scale(z, 1.0 / norm(z));
  return z;
}

SpectralResult spectral_gap(const ComponentView& h, const SpectralOptions& options) {
  require_gap_input(h);
  require(options.tol > 0.0 && options.max_iter > 0, ErrorCode::invalid_argument, "tol and max_iter must be positive");
  const auto top = stationary_vector(h);
  SecondEigenSolver solver([&h](std::span<const double> x, std::span<double> y) { normalized_operator_apply(h, x, y); },
                           top, options);
  return solver.run();
}

SpectralResult spectral_gap(const ComponentView& h, double tol, int max_iter) {
  SpectralOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return spectral_gap(h, options);
}

std::vector<double> dense_spectrum(const ComponentView& h) {
  const std::size_t k = h.size();
  if (k > dense_spectrum_limit) {
    fail(ErrorCode::guard_exceeded, "dense_spectrum refuses k = " + std::to_string(k) + " (limit 512)");
  }
  std::vector<double> a(k * k, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * k + j]; };
  for (VertexId u = 0; u < k; ++u) {
    at(u, u) = 1.0;
    for (VertexId w : h.neighbors(u)) {
      at(u, w) = -1.0 / std::sqrt(static_cast<double>(h.degree(u)) * static_cast<double>(h.degree(w)));
    }
  }
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off_norm() > 1e-10; ++sweep) {
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double apq = at(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < k; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = c * arp - s * arq;
          at(r, q) = at(q, r) = s * arp + c * arq;
        }
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
      }
    }
  }
  require(off_norm() <= 1e-10, ErrorCode::not_converged, "Jacobi sweeps did not converge");
  std::vector<double> eig(k);
  for (std::size_t i = 0; i < k; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double random_walk_matrix_gap(const ComponentView& h, double tol) {
  require_gap_input(h);
  const std::size_t k = h.size();
  std::vector<double> sqrt_deg(k);
  for (VertexId v = 0; v < k; ++v) sqrt_deg[v] = std::sqrt(static_cast<double>(h.degree(v)));
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    // D^{1/2} P D^{-1/2} x with P = D^{-1} A
    std::vector<double> pulled(k);
    for (VertexId v = 0; v < k; ++v) pulled[v] = x[v] / sqrt_deg[v];
    for (VertexId u = 0; u < k; ++u) {
      double s = 0.0;
      for (VertexId w : h.neighbors(u)) s += pulled[w];
      y[u] = sqrt_deg[u] * (s / static_cast<double>(h.degree(u)));
    }
  };
  SpectralOptions options;
  options.tol = tol;
  SecondEigenSolver solver(apply, stationary_vector(h), options);
  return solver.run().lambda1;
}

}  // namespace hrg
