#ifndef LSKR_METRICS_HPP
#define LSKR_METRICS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"
#include "lskr/surface_fit.hpp"

namespace lskr {

inline constexpr int kDefaultCurveGrid = 512;

struct EvalReport {
  double rmse = 0.0;
  double rel_error = 0.0;
  std::optional<double> mean_curve_dist;
  Eigen::VectorXd eig_profile;
  long long runtime_ms = 0;
};

namespace detail {
inline double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}
}  // namespace detail

/// Distance from each point to the extracted zero set of `truth` (polyline
/// segments on a grid_res grid, so accurate to the grid spacing).
inline Eigen::VectorXd curve_distance(const PointCloud& X, const FourierCoeffs& truth, int grid_res = kDefaultCurveGrid) {
  if (X.dim() != 2) throw Error(ErrorCode::Unsupported, "curve_distance: only n = 2");
  const std::vector<Polyline> lines = extract_levelset_2d(truth, grid_res);
  if (lines.empty()) throw Error(ErrorCode::NoZeroSet, "curve_distance: truth has no zero set in the unit square");
  Eigen::VectorXd out(X.size());
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    const Eigen::Vector2d p = X.data().col(i);
    double best = std::numeric_limits<double>::infinity();
    for (const Polyline& line : lines) {
      if (line.size() == 1) best = std::min(best, (p - line[0]).norm());
      for (std::size_t s = 1; s < line.size(); ++s) best = std::min(best, detail::segment_distance(p, line[s - 1], line[s]));
    }
    out[i] = best;
  }
  return out;
}

inline double mean_curve_distance(const PointCloud& X, const FourierCoeffs& truth, int grid_res = kDefaultCurveGrid) {
  return curve_distance(X, truth, grid_res).mean();
}

/// ||X - X_true||_F / ||X_true||_F.
inline double relative_error(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_true) {
  if (X.rows() != X_true.rows() || X.cols() != X_true.cols())
    throw Error(ErrorCode::InvalidInput, "relative_error: shape mismatch");
  const double ref = X_true.norm();
  if (ref == 0.0) throw Error(ErrorCode::InvalidInput, "relative_error: reference has zero norm");
  return (X - X_true).norm() / ref;
}

inline double relative_error(const PointCloud& X, const PointCloud& X_true) {
  return relative_error(X.data(), X_true.data());
}

inline double rmse(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_true) {
  if (X.rows() != X_true.rows() || X.cols() != X_true.cols()) throw Error(ErrorCode::InvalidInput, "rmse: shape mismatch");
  return std::sqrt((X - X_true).squaredNorm() / static_cast<double>(X.size()));
}

}  // namespace lskr

#endif  // LSKR_METRICS_HPP
