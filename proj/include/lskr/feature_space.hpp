#ifndef LSKR_FEATURE_SPACE_HPP
#define LSKR_FEATURE_SPACE_HPP

// Explicit exponential feature maps phi_G(x) = [exp(j 2 pi k^T x)]_{k in G}.
// Only practical in low dimension; the kernel engine reproduces the same
// inner products without forming these matrices.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>

#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"

namespace lskr {

/// Diagonal feature weights exp(-pi^2 sigma^2 |k|^2), one per support entry.
inline Eigen::VectorXd support_weights(const SupportSet& support, double sigma) {
  constexpr double pi = std::numbers::pi;
  Eigen::VectorXd w(support.size());
  for (Eigen::Index m = 0; m < support.size(); ++m) {
    const double k2 = support.freqs().col(m).cast<double>().squaredNorm();
    w[m] = std::exp(-pi * pi * sigma * sigma * k2);
  }
  return w;
}

inline Eigen::VectorXcd feature_map(const Point& x, const SupportSet& support) {
  if (x.dim() != support.dim())
    throw Error(ErrorCode::InvalidInput, "feature_map: point and support dimensions differ");
  const Eigen::VectorXd r = wrap_point(x.coords).coords;
  Eigen::VectorXcd phi(support.size());
  for (Eigen::Index m = 0; m < support.size(); ++m) {
    const double phase = 2.0 * std::numbers::pi * support.freqs().col(m).cast<double>().dot(r);
    phi[m] = std::polar(1.0, phase);
  }
  return phi;
}

struct FeatureMatrix {
  SupportSet support;
  Eigen::MatrixXcd values;  // |G| x N
  bool weighted = false;
  std::optional<double> sigma;
};

/// Stacks feature maps column-wise; with `sigma`, row k is scaled by the
/// Gaussian weight of k.
inline FeatureMatrix feature_matrix(const PointCloud& X, const SupportSet& support,
                                    std::optional<double> sigma = std::nullopt) {
  Eigen::MatrixXcd values(support.size(), X.size());
  for (Eigen::Index i = 0; i < X.size(); ++i) values.col(i) = feature_map(X.point(i), support);
  if (sigma) values = support_weights(support, *sigma).asDiagonal() * values;
  return FeatureMatrix{support, std::move(values), sigma.has_value(), sigma};
}

/// psi(x) = sum_k c_k exp(j 2 pi k^T x) at every point, as a 1 x N row.
inline Eigen::RowVectorXcd potential_values(const PointCloud& X, const FourierCoeffs& c) {
  if (X.dim() != c.support.dim())
    throw Error(ErrorCode::InvalidInput, "potential: cloud and coefficient dimensions differ");
  const FeatureMatrix phi = feature_matrix(X, c.support);
  return c.values.transpose() * phi.values;
}

/// || c^T Phi(X) ||_2; zero iff every point lies on the zero set of psi.
inline double annihilation_residual(const PointCloud& X, const FourierCoeffs& c) {
  return potential_values(X, c).norm();
}

/// Descending singular values of the explicit feature matrix.
inline Eigen::VectorXd feature_singular_values(const FeatureMatrix& phi) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi.values);
  return svd.singularValues();
}

inline Eigen::Index numerical_rank(const Eigen::VectorXd& descending_values, double tau) {
  if (descending_values.size() == 0) return 0;
  const double cutoff = tau * descending_values[0];
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < descending_values.size(); ++i)
    if (descending_values[i] > cutoff) ++r;
  return r;
}

}  // namespace lskr

#endif  // LSKR_FEATURE_SPACE_HPP
