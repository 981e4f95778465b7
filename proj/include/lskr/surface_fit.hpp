#ifndef LSKR_SURFACE_FIT_HPP
#define LSKR_SURFACE_FIT_HPP

// Explicit surface fitting: the potential's coefficients are the minimum
// eigenvector of Q = sum_i phi(x_i) phi(x_i)^H, plus grid evaluation and
// marching-squares extraction of 2-D level sets.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "lskr/error.hpp"
#include "lskr/feature_space.hpp"
#include "lskr/geometry_types.hpp"

namespace lskr {

inline constexpr double kDefaultFitTol = 1e-8;
inline constexpr double kDefaultSurfaceSigma = 0.15;

/// Sum over points of phi(x_i) phi(x_i)^H (optionally Gaussian-weighted maps).
inline Eigen::MatrixXcd gram_Q(const PointCloud& X, const SupportSet& support,
                               std::optional<double> sigma = std::nullopt) {
  const FeatureMatrix phi = feature_matrix(X, support, sigma);
  Eigen::MatrixXcd Q = phi.values * phi.values.adjoint();
  // Exact Hermitian symmetry for the eigensolver.
  return (0.5 * (Q + Q.adjoint())).eval();
}

struct SurfaceModel {
  FourierCoeffs coeffs;  // unit norm, in the (possibly weighted) basis
  bool weighted = false;
  double sigma = 0.0;
  Eigen::Index nullspace_dim = 0;
  Eigen::MatrixXcd nullspace_basis;  // |G| x nullspace_dim, orthonormal columns
  Eigen::VectorXd eigenvalues;       // ascending eigenvalues of Q
  double tol = kDefaultFitTol;

  /// Effective Fourier coefficients c_k w_k of psi.
  Eigen::VectorXcd effective_values(const Eigen::VectorXcd& basis_values) const {
    if (!weighted) return basis_values;
    return support_weights(coeffs.support, sigma).asDiagonal() * basis_values;
  }
  FourierCoeffs effective_coeffs() const {
    return FourierCoeffs(coeffs.support, effective_values(coeffs.values), coeffs.conjugate_symmetric);
  }
};

/// Rotates the global phase of `c` so that psi is as close to real as
/// possible, then projects onto conjugate-symmetric vectors and renormalizes.
inline Eigen::VectorXcd project_conjugate_symmetric(const SupportSet& support, const Eigen::VectorXcd& c) {
  Eigen::VectorXcd mirrored(c.size());
  for (Eigen::Index m = 0; m < support.size(); ++m) {
    const Eigen::Index r = support.index_of(-support.freq(m));
    if (r < 0) throw Error(ErrorCode::InvalidInput, "support is not symmetric under k -> -k");
    mirrored[m] = std::conj(c[r]);
  }
  const cdouble overlap = c.dot(mirrored);  // c^H J conj(c)
  const cdouble rot = std::polar(1.0, 0.5 * std::arg(overlap));
  const Eigen::VectorXcd a = c * rot;
  Eigen::VectorXcd sym(c.size());
  for (Eigen::Index m = 0; m < support.size(); ++m) {
    const Eigen::Index r = support.index_of(-support.freq(m));
    sym[m] = 0.5 * (a[m] + std::conj(a[r]));
  }
  const double nrm = sym.norm();
  if (nrm < 1e-300) throw Error(ErrorCode::NumericalFailure, "symmetric projection vanished");
  sym /= nrm;
  // Enforce exact symmetry after normalization.
  for (Eigen::Index m = 0; m < support.size(); ++m) {
    const Eigen::Index r = support.index_of(-support.freq(m));
    if (r > m) sym[r] = std::conj(sym[m]);
    if (r == m) sym[m] = sym[m].real();
  }
  return sym;
}

namespace detail {
// Deterministic global phase: largest-magnitude entry becomes real positive.
inline void canonical_phase(Eigen::VectorXcd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (std::abs(v[arg]) > 0) v *= std::conj(v[arg]) / std::abs(v[arg]);
}
}  // namespace detail

/// Minimum-eigenvector fit. `tol` is relative to the largest eigenvalue of Q.
inline SurfaceModel fit_surface(const PointCloud& X, const SupportSet& support,
                                std::optional<double> sigma = std::nullopt, double tol = kDefaultFitTol,
                                bool conjugate_symmetric = false) {
  if (X.size() == 0) throw Error(ErrorCode::EmptyCloud, "fit_surface: no points");
  const Eigen::MatrixXcd Q = gram_Q(X, support, sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Q);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "fit_surface: eigensolver failed");

  // Q's eigenvectors v satisfy sum |phi^H v|^2 = v^H Q v, so the coefficients
  // with psi = c^T phi are their conjugates.
  const Eigen::VectorXd& evals = eig.eigenvalues();
  const double lmax = evals[evals.size() - 1];
  Eigen::Index dim = 0;
  while (dim < evals.size() && evals[dim] <= tol * lmax) ++dim;

  Eigen::VectorXcd c = eig.eigenvectors().col(0).conjugate();
  if (conjugate_symmetric) {
    c = project_conjugate_symmetric(support, c);
  } else {
    detail::canonical_phase(c);
  }
  Eigen::MatrixXcd basis = eig.eigenvectors().leftCols(dim).conjugate();

  SurfaceModel model{FourierCoeffs(support, c, conjugate_symmetric)};
  model.weighted = sigma.has_value();
  model.sigma = sigma.value_or(0.0);
  model.nullspace_dim = dim;
  model.nullspace_basis = std::move(basis);
  model.eigenvalues = evals;
  model.tol = tol;
  return model;
}

namespace detail {
inline Eigen::MatrixXcd grid_features(const std::vector<Point>& grid, const SupportSet& support) {
  Eigen::MatrixXcd phi(support.size(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    phi.col(static_cast<Eigen::Index>(i)) = feature_map(grid[i], support);
  return phi;
}
}  // namespace detail

inline Eigen::VectorXcd eval_potential(const SurfaceModel& model, const std::vector<Point>& grid) {
  const Eigen::MatrixXcd phi = detail::grid_features(grid, model.coeffs.support);
  return (model.effective_values(model.coeffs.values).transpose() * phi).transpose();
}

/// sum_d |psi_d(x)|^2 over the null-space coefficient vectors.
inline Eigen::VectorXd sos_potential(const SurfaceModel& model, const std::vector<Point>& grid) {
  if (model.nullspace_dim < 1) throw Error(ErrorCode::NoNullspace, "sos_potential: model has an empty null space");
  const Eigen::MatrixXcd phi = detail::grid_features(grid, model.coeffs.support);
  Eigen::MatrixXcd basis = model.nullspace_basis;
  if (model.weighted) basis = support_weights(model.coeffs.support, model.sigma).asDiagonal() * basis;
  const Eigen::MatrixXcd vals = basis.transpose() * phi;  // d x |grid|
  return vals.cwiseAbs2().colwise().sum().transpose();
}

// ---------------------------------------------------------------------------
// Level sets

using Polyline = std::vector<Eigen::Vector2d>;

/// Regular grid on [-1/2, 1/2]^2 with `res` cells per side; field(i, j) is the
/// value at (x_i, y_j) = (-1/2 + i/res, -1/2 + j/res).
template <typename Fn>
Eigen::MatrixXd sample_grid(int res, Fn&& fn) {
  Eigen::MatrixXd field(res + 1, res + 1);
  for (int i = 0; i <= res; ++i)
    for (int j = 0; j <= res; ++j) field(i, j) = fn(-0.5 + double(i) / res, -0.5 + double(j) / res);
  return field;
}

/// Real part of psi on the grid, using separable exponential tables.
inline Eigen::MatrixXd potential_grid(const FourierCoeffs& c, int res) {
  if (c.support.dim() != 2) throw Error(ErrorCode::Unsupported, "potential_grid: only 2-D supports");
  const int kmax = c.support.freqs().cwiseAbs().maxCoeff();
  const int side = 2 * kmax + 1;
  Eigen::MatrixXcd table(side, res + 1);  // table(k + kmax, i) = exp(j 2 pi k x_i)
  for (int k = -kmax; k <= kmax; ++k)
    for (int i = 0; i <= res; ++i)
      table(k + kmax, i) = std::polar(1.0, 2.0 * std::numbers::pi * k * (-0.5 + double(i) / res));
  Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(res + 1, res + 1);
  for (Eigen::Index m = 0; m < c.support.size(); ++m) {
    const int kx = c.support.freqs()(0, m), ky = c.support.freqs()(1, m);
    field += c.values[m] * (table.row(kx + kmax).transpose() * table.row(ky + kmax));
  }
  return field.real();
}

/// Marching squares on a sampled field; saddles resolved by the cell-center
/// average. Open polylines come first, then closed ones (first vertex repeated).
inline std::vector<Polyline> marching_squares(const Eigen::MatrixXd& field, double level = 0.0) {
  const long res = field.rows() - 1;
  if (res < 1 || field.cols() != field.rows())
    throw Error(ErrorCode::InvalidInput, "marching_squares: need a square grid of at least 2x2 samples");
  auto coord = [res](long i) { return -0.5 + double(i) / double(res); };
  auto inside = [&](long i, long j) { return field(i, j) > level; };
  // Edge ids: 2 * vertex for the +x edge, 2 * vertex + 1 for the +y edge.
  auto vid = [res](long i, long j) { return i * (res + 1) + j; };
  std::map<long, Eigen::Vector2d> crossing;
  auto edge_point = [&](long id) -> long {
    if (crossing.count(id)) return id;
    const long v = id / 2;
    const long i = v / (res + 1), j = v % (res + 1);
    const bool along_x = (id % 2) == 0;
    const long i2 = along_x ? i + 1 : i, j2 = along_x ? j : j + 1;
    const double fa = field(i, j), fb = field(i2, j2);
    const double t = std::clamp((level - fa) / (fb - fa), 0.0, 1.0);
    crossing[id] = Eigen::Vector2d(coord(i) + t * (coord(i2) - coord(i)), coord(j) + t * (coord(j2) - coord(j)));
    return id;
  };

  std::vector<std::pair<long, long>> segments;
  for (long i = 0; i < res; ++i) {
    for (long j = 0; j < res; ++j) {
      const bool c00 = inside(i, j), c10 = inside(i + 1, j), c11 = inside(i + 1, j + 1), c01 = inside(i, j + 1);
      const long bottom = 2 * vid(i, j), right = 2 * vid(i + 1, j) + 1, top = 2 * vid(i, j + 1),
                 left = 2 * vid(i, j) + 1;
      std::vector<long> edges;
      if (c00 != c10) edges.push_back(bottom);
      if (c10 != c11) edges.push_back(right);
      if (c01 != c11) edges.push_back(top);
      if (c00 != c01) edges.push_back(left);
      if (edges.size() == 2) {
        segments.emplace_back(edge_point(edges[0]), edge_point(edges[1]));
      } else if (edges.size() == 4) {
        const double center = 0.25 * (field(i, j) + field(i + 1, j) + field(i + 1, j + 1) + field(i, j + 1));
        if ((center > level) == c00) {
          segments.emplace_back(edge_point(bottom), edge_point(right));
          segments.emplace_back(edge_point(top), edge_point(left));
        } else {
          segments.emplace_back(edge_point(left), edge_point(bottom));
          segments.emplace_back(edge_point(right), edge_point(top));
        }
      }
    }
  }

  std::map<long, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> out;
  auto walk = [&](long start) {
    Polyline line{crossing[start]};
    long cur = start;
    for (;;) {
      std::size_t next = segments.size();
      for (std::size_t s : incident[cur])
        if (!used[s]) {
          next = s;
          break;
        }
      if (next == segments.size()) break;
      used[next] = true;
      cur = segments[next].first == cur ? segments[next].second : segments[next].first;
      line.push_back(crossing[cur]);
    }
    out.push_back(std::move(line));
  };
  for (const auto& [id, segs] : incident)
    if (segs.size() == 1 && !used[segs[0]]) walk(id);
  for (const auto& [id, segs] : incident)
    for (std::size_t s : segs)
      if (!used[s]) walk(id);
  return out;
}

enum class LevelsetField { RealPotential, SumOfSquares };

/// Zero set of psi for a 2-D Fourier series.
inline std::vector<Polyline> extract_levelset_2d(const FourierCoeffs& c, int grid_res) {
  if (c.support.dim() != 2) throw Error(ErrorCode::Unsupported, "extract_levelset_2d: only n = 2");
  if (grid_res < 1) throw Error(ErrorCode::InvalidInput, "extract_levelset_2d: grid_res must be positive");
  return marching_squares(potential_grid(c, grid_res), 0.0);
}

/// Level set of a fitted model: real(psi) = 0, or sos = threshold.
inline std::vector<Polyline> extract_levelset_2d(const SurfaceModel& model, int grid_res,
                                                 LevelsetField field = LevelsetField::RealPotential,
                                                 double sos_threshold = 0.0) {
  if (model.coeffs.support.dim() != 2) throw Error(ErrorCode::Unsupported, "extract_levelset_2d: only n = 2");
  if (field == LevelsetField::RealPotential) return extract_levelset_2d(model.effective_coeffs(), grid_res);

  if (model.nullspace_dim < 1) throw Error(ErrorCode::NoNullspace, "extract_levelset_2d: empty null space");
  Eigen::MatrixXd sos = Eigen::MatrixXd::Zero(grid_res + 1, grid_res + 1);
  for (Eigen::Index d = 0; d < model.nullspace_dim; ++d) {
    const FourierCoeffs cd(model.coeffs.support, model.effective_values(model.nullspace_basis.col(d)));
    // |psi_d|^2 needs both parts; evaluate real and imaginary fields.
    const Eigen::MatrixXd re = potential_grid(cd, grid_res);
    const FourierCoeffs cd_im(model.coeffs.support, cdouble(0, -1) * cd.values);
    const Eigen::MatrixXd im = potential_grid(cd_im, grid_res);
    sos += re.cwiseAbs2() + im.cwiseAbs2();
  }
  return marching_squares(sos, sos_threshold);
}

}  // namespace lskr

#endif  // LSKR_SURFACE_FIT_HPP
