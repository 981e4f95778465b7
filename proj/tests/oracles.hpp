#ifndef LSKR_TESTS_ORACLES_HPP
#define LSKR_TESTS_ORACLES_HPP

// Independent reference computations used only by the test suites. None of
// these call into the code path they check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Number of integer shifts t with {-kl..kl}^n + t inside {-kg..kg}^n, by
/// enumerating every candidate shift in a generous box.
inline long long brute_force_translate_count(int n, int kg, int kl) {
  const int span = 2 * kg + 2;
  std::vector<int> t(n, -span);
  long long count = 0;
  for (;;) {
    bool fits = true;
    for (int d = 0; d < n && fits; ++d)
      // Lambda + t inside Gamma in this coordinate iff every lambda entry shifted stays in range.
      for (int l = -kl; l <= kl; ++l)
        if (std::abs(l + t[d]) > kg) {
          fits = false;
          break;
        }
    if (fits) ++count;
    int d = n - 1;
    while (d >= 0 && ++t[d] > span) t[d--] = -span;
    if (d < 0) break;
  }
  return count;
}

/// Phi^H Phi from explicitly enumerated exponentials over {-K..K}^n.
inline Eigen::MatrixXd explicit_dirichlet_gram(const Eigen::MatrixXd& X, int K) {
  const int n = static_cast<int>(X.rows());
  std::vector<std::vector<int>> freqs{{}};
  for (int d = 0; d < n; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& f : freqs)
      for (int k = -K; k <= K; ++k) {
        auto g = f;
        g.push_back(k);
        next.push_back(g);
      }
    freqs = next;
  }
  Eigen::MatrixXcd phi(static_cast<Eigen::Index>(freqs.size()), X.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (std::size_t m = 0; m < freqs.size(); ++m) {
      double ph = 0;
      for (int d = 0; d < n; ++d) ph += 2.0 * std::numbers::pi * freqs[m][d] * X(d, i);
      phi(static_cast<Eigen::Index>(m), i) = std::polar(1.0, ph);
    }
  return (phi.adjoint() * phi).real();
}

/// Periodized Gaussian from its Fourier series, truncated at |k|_inf <= K and
/// rescaled to the spatial image-sum normalization.
inline Eigen::MatrixXd fourier_gaussian_gram(const Eigen::MatrixXd& X, double sigma, int K) {
  const double pi = std::numbers::pi;
  const Eigen::Index N = X.cols(), n = X.rows();
  Eigen::MatrixXd G(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      double v = 1.0;
      for (Eigen::Index d = 0; d < n; ++d) {
        const double r = X(d, j) - X(d, i);
        double s = 0.0;
        for (int k = -K; k <= K; ++k) s += std::exp(-2.0 * pi * pi * sigma * sigma * k * k) * std::cos(2.0 * pi * k * r);
        v *= sigma * std::sqrt(2.0 * pi) * s;
      }
      G(i, j) = v;
    }
  return G;
}

/// Dense solve of (M + lambda L kron I_n) vec(X) = vec(M .* B) for an entry mask M.
inline Eigen::MatrixXd dense_masked_laplacian_solve(const Eigen::Matrix<bool, -1, -1>& mask, const Eigen::MatrixXd& B,
                                                    const Eigen::MatrixXd& L, double lambda) {
  const Eigen::Index n = B.rows(), N = B.cols(), dim = n * N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  auto idx = [n](Eigen::Index d, Eigen::Index i) { return i * n + d; };
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index d = 0; d < n; ++d) {
      if (mask(d, i)) {
        A(idx(d, i), idx(d, i)) += 1.0;
        rhs[idx(d, i)] = B(d, i);
      }
      for (Eigen::Index j = 0; j < N; ++j) A(idx(d, i), idx(d, j)) += lambda * L(i, j);
    }
  const Eigen::VectorXd x = A.fullPivLu().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), n, N);
}

inline Eigen::MatrixXd random_uniform(Eigen::Index rows, Eigen::Index cols, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = u(rng);
  return M;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index N, std::uint64_t seed) {
  Eigen::MatrixXd A = random_uniform(N, N, -1.0, 1.0, seed);
  return 0.5 * (A + A.transpose());
}

inline Eigen::MatrixXd random_psd(Eigen::Index N, Eigen::Index rank, std::uint64_t seed) {
  const Eigen::MatrixXd F = random_uniform(N, rank, -1.0, 1.0, seed);
  return F * F.transpose();
}

/// Points on cos 2 pi x + cos 2 pi y = 1, solved for y at given x by the
/// closed form y = acos(1 - cos 2 pi x) / (2 pi), alternating signs.
inline Eigen::MatrixXd cos_curve_points(int N) {
  const double pi = std::numbers::pi;
  Eigen::MatrixXd X(2, N);
  for (int i = 0; i < N; ++i) {
    const double x = -0.25 + 0.5 * (i + 0.5) / N;
    const double y = std::acos(1.0 - std::cos(2.0 * pi * x)) / (2.0 * pi);
    X(0, i) = x;
    X(1, i) = (i % 2 == 0) ? y : -y;
  }
  return X;
}

inline double cos_curve_psi(double x, double y) {
  return std::cos(2.0 * std::numbers::pi * x) + std::cos(2.0 * std::numbers::pi * y) - 1.0;
}

}  // namespace oracle

#endif  // LSKR_TESTS_ORACLES_HPP
