#ifndef LSKR_KERNEL_ENGINE_HPP
#define LSKR_KERNEL_ENGINE_HPP

// Shift-invariant kernels and Gram matrices. For a cube support G the
// Dirichlet kernel reproduces Phi_G(X)^H Phi_G(X) exactly; the periodized
// Gaussian is the limit of Gaussian-weighted feature maps.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"
#include "lskr/parallel.hpp"

namespace lskr {

inline constexpr Eigen::Index kMaxGramPoints = 5000;

namespace detail {

// sin((2K+1) pi r) / sin(pi r) for r already wrapped to [-1/2, 1/2).
inline double dirichlet_1d(double r, int K) {
  constexpr double pi = std::numbers::pi;
  if (std::abs(r) < 1e-8) {
    // Direct cosine sum near the removable singularity; exact at r = 0.
    double s = 1.0;
    for (int k = 1; k <= K; ++k) s += 2.0 * std::cos(2.0 * pi * k * r);
    return s;
  }
  return std::sin((2 * K + 1) * pi * r) / std::sin(pi * r);
}

// Omitted images sit at least 8 sigma + 1/2 away: relative truncation below 1e-13.
inline int gaussian_image_layers(double sigma) { return static_cast<int>(std::ceil(8.0 * sigma)) + 1; }

inline double periodized_gaussian_1d(double r, double sigma, int layers) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double s = 0.0;
  for (int m = -layers; m <= layers; ++m) {
    const double t = r + m;
    s += std::exp(-t * t * inv);
  }
  return s;
}

inline double periodized_gaussian_1d_deriv(double r, double sigma, int layers) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double s = 0.0;
  for (int m = -layers; m <= layers; ++m) {
    const double t = r + m;
    s -= t / (sigma * sigma) * std::exp(-t * t * inv);
  }
  return s;
}

}  // namespace detail

/// kappa(r). Dirichlet and periodized Gaussian are 1-periodic in every
/// coordinate; the free-space Gaussian is exp(-|r|^2 / (2 sigma^2)).
template <typename Derived>
double kernel_eval(const Eigen::MatrixBase<Derived>& r, const KernelSpec& spec) {
  switch (spec.family) {
    case KernelFamily::Dirichlet: {
      const int K = *spec.support->cube_radius();
      if (r.size() != spec.support->dim())
        throw Error(ErrorCode::InvalidInput, "kernel_eval: displacement dimension mismatch");
      double v = 1.0;
      for (Eigen::Index d = 0; d < r.size(); ++d) v *= detail::dirichlet_1d(wrap_coordinate(r[d]), K);
      return v;
    }
    case KernelFamily::PeriodizedGaussian: {
      const int layers = detail::gaussian_image_layers(spec.sigma);
      double v = 1.0;
      for (Eigen::Index d = 0; d < r.size(); ++d)
        v *= detail::periodized_gaussian_1d(wrap_coordinate(r[d]), spec.sigma, layers);
      return v;
    }
    case KernelFamily::Gaussian:
      return std::exp(-r.squaredNorm() / (2.0 * spec.sigma * spec.sigma));
  }
  return 0.0;
}

/// Gradient of kappa with respect to the displacement r (Gaussian families).
template <typename Derived>
Eigen::VectorXd kernel_gradient(const Eigen::MatrixBase<Derived>& r, const KernelSpec& spec) {
  const Eigen::Index n = r.size();
  Eigen::VectorXd g(n);
  switch (spec.family) {
    case KernelFamily::Dirichlet:
      throw Error(ErrorCode::Unsupported, "kernel_gradient: Dirichlet kernel is not supported");
    case KernelFamily::Gaussian: {
      const double k = kernel_eval(r, spec);
      g = -r / (spec.sigma * spec.sigma) * k;
      return g;
    }
    case KernelFamily::PeriodizedGaussian: {
      const int layers = detail::gaussian_image_layers(spec.sigma);
      Eigen::VectorXd p(n), dp(n);
      for (Eigen::Index d = 0; d < n; ++d) {
        const double w = wrap_coordinate(r[d]);
        p[d] = detail::periodized_gaussian_1d(w, spec.sigma, layers);
        dp[d] = detail::periodized_gaussian_1d_deriv(w, spec.sigma, layers);
      }
      for (Eigen::Index d = 0; d < n; ++d) {
        double v = dp[d];
        for (Eigen::Index e = 0; e < n; ++e)
          if (e != d) v *= p[e];
        g[d] = v;
      }
      return g;
    }
  }
  return g;
}

/// Fourier coefficient scale linking the periodized Gaussian to weighted maps:
/// kappa_sigma(r) = (sigma sqrt(2 pi))^n sum_k exp(-2 pi^2 sigma^2 |k|^2) e^{j 2 pi k^T r}.
inline double gaussian_fourier_scale(double sigma, Eigen::Index n) {
  return std::pow(sigma * std::sqrt(2.0 * std::numbers::pi), static_cast<double>(n));
}

struct GramMatrix {
  Eigen::MatrixXd values;
  KernelSpec spec;

  Eigen::Index size() const { return values.rows(); }
};

/// K_ij = kappa(x_j - x_i); upper triangle computed, then mirrored.
inline GramMatrix gram_matrix(const Eigen::MatrixXd& X, const KernelSpec& spec) {
  const Eigen::Index N = X.cols();
  if (N < 1) throw Error(ErrorCode::EmptyCloud, "gram_matrix: empty cloud");
  if (N > kMaxGramPoints)
    throw Error(ErrorCode::CapacityExceeded,
                "gram_matrix: at most " + std::to_string(kMaxGramPoints) + " points are supported");
  Eigen::MatrixXd K(N, N);
  parallel_for(N, [&](long i) {
    for (Eigen::Index j = i; j < N; ++j) K(i, j) = kernel_eval(X.col(j) - X.col(i), spec);
  });
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < i; ++j) K(i, j) = K(j, i);
  return GramMatrix{std::move(K), spec};
}

inline GramMatrix gram_matrix(const PointCloud& X, const KernelSpec& spec) { return gram_matrix(X.data(), spec); }

struct RankProfile {
  Eigen::VectorXd eigenvalues;  // descending
  std::vector<double> thresholds;
  std::vector<Eigen::Index> ranks;  // eigenvalues > tau * lambda_max
};

inline Eigen::VectorXd descending_eigenvalues(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
  return eig.eigenvalues().reverse();
}

inline RankProfile kernel_rank_profile(const GramMatrix& G, const std::vector<double>& thresholds) {
  RankProfile out;
  out.eigenvalues = descending_eigenvalues(G.values);
  out.thresholds = thresholds;
  const double lmax = out.eigenvalues.size() ? out.eigenvalues[0] : 0.0;
  for (double tau : thresholds) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
      if (out.eigenvalues[i] > tau * lmax) ++r;
    out.ranks.push_back(r);
  }
  return out;
}

}  // namespace lskr

#endif  // LSKR_KERNEL_ENGINE_HPP
