#ifndef LSKR_IRLS_RECOVERY_HPP
#define LSKR_IRLS_RECOVERY_HPP

// Nuclear-norm regularized recovery
//   min_X ||A(X) - b||^2 + lambda ||Phi(X)||_*
// by iterative reweighting: Q = (K(X) + gamma I)^{-1/2} turns the nuclear
// norm into trace(K(X) Q), whose gradient is linearized into a graph
// Laplacian, so every step is a Laplacian-regularized least-squares solve.
// Only the N x N kernel matrix is ever formed.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lskr/conjugate_gradient.hpp"
#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"
#include "lskr/kernel_engine.hpp"
#include "lskr/operators.hpp"

namespace lskr {

struct IrlsConfig {
  double lambda = 1.0;
  KernelSpec kernel = KernelSpec::periodized_gaussian(0.15);
  std::optional<double> gamma0;     // default 0.01 * lambda_max(K(X0))
  double gamma_decay = 2.0;         // gamma <- max(gamma / decay, gamma_min)
  std::optional<double> gamma_min;  // default 1e-8 * lambda_max(K(X0))
  int outer_iters = 30;
  double cg_tol = 1e-10;
  int cg_max_iters = 500;
  std::uint64_t seed = 0;
  double change_tol = 1e-6;  // early exit on relative iterate change

  void validate() const {
    if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidInput, "lambda must be non-negative");
    if (!kernel.is_gaussian())
      throw Error(ErrorCode::Unsupported, "IRLS needs a Gaussian kernel; the Dirichlet kernel is not supported");
    if (gamma0 && !(*gamma0 > 0.0)) throw Error(ErrorCode::InvalidInput, "gamma0 must be positive");
    if (gamma_min && !(*gamma_min > 0.0)) throw Error(ErrorCode::InvalidInput, "gamma_min must be positive");
    if (!(gamma_decay > 1.0)) throw Error(ErrorCode::InvalidInput, "gamma_decay must exceed 1");
    if (outer_iters < 1) throw Error(ErrorCode::InvalidInput, "outer_iters must be at least 1");
    if (!(cg_tol > 0.0) || cg_max_iters < 1) throw Error(ErrorCode::InvalidInput, "invalid CG settings");
  }
};

/// Eigendecomposition of a PSD kernel matrix with negative eigenvalues clipped.
struct KernelSpectrum {
  Eigen::VectorXd values;  // ascending, >= 0
  Eigen::MatrixXd vectors;

  explicit KernelSpectrum(const Eigen::MatrixXd& K) {
    if (!K.allFinite()) throw Error(ErrorCode::NumericalFailure, "kernel matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (K + K.transpose()));
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "kernel eigendecomposition failed");
    values = eig.eigenvalues().cwiseMax(0.0);
    vectors = eig.eigenvectors();
  }

  double max() const { return values.size() ? values[values.size() - 1] : 0.0; }
};

/// (K + gamma I)^{-1/2}, exactly symmetric.
inline Eigen::MatrixXd q_update(const KernelSpectrum& spec, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidInput, "q_update: gamma must be positive");
  const Eigen::VectorXd scale = (spec.values.array() + gamma).rsqrt();
  Eigen::MatrixXd Q = spec.vectors * scale.asDiagonal() * spec.vectors.transpose();
  return 0.5 * (Q + Q.transpose());
}

inline Eigen::MatrixXd q_update(const GramMatrix& G, double gamma) { return q_update(KernelSpectrum(G.values), gamma); }

/// sum_i sqrt(s_i + gamma); the nuclear norm of any factor of K at gamma = 0.
inline double nuclear_norm_estimate(const KernelSpectrum& spec, double gamma) {
  if (gamma < 0.0) throw Error(ErrorCode::InvalidInput, "nuclear_norm_estimate: gamma must be >= 0");
  return (spec.values.array() + gamma).sqrt().sum();
}

inline double nuclear_norm_estimate(const GramMatrix& G, double gamma) {
  return nuclear_norm_estimate(KernelSpectrum(G.values), gamma);
}

/// trace(K Q) for symmetric matrices.
inline double surrogate_value(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Q) {
  return (K.array() * Q.array()).sum();
}

struct Laplacian {
  Eigen::MatrixXd W;
  Eigen::MatrixXd L;
};

/// Linearized weights W_ij = f'(d_ij) / d_ij * Q_ij = -(1/sigma^2) K_ij Q_ij
/// for Gaussian f; the diagonal of W is zero. With `clip_negative`, pairs with
/// negative weight (Q_ij > 0) are dropped so that L = D - W is PSD.
inline Laplacian laplacian_from_kernel(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Q, const KernelSpec& spec,
                                       bool clip_negative = false) {
  if (!spec.is_gaussian())
    throw Error(ErrorCode::Unsupported, "build_laplacian: Dirichlet kernel derivative is not supported");
  if (K.rows() != Q.rows() || K.cols() != Q.cols() || K.rows() != K.cols())
    throw Error(ErrorCode::InvalidInput, "build_laplacian: K and Q must be square and equal-sized");
  const Eigen::Index N = K.rows();
  const double inv_s2 = 1.0 / (spec.sigma * spec.sigma);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) {
      if (i == j) continue;
      const double q = 0.5 * (Q(i, j) + Q(j, i));
      const double k = 0.5 * (K(i, j) + K(j, i));
      W(i, j) = -inv_s2 * k * q;
      if (clip_negative) W(i, j) = std::max(0.0, W(i, j));
    }
  Laplacian out;
  out.L = -W;
  out.L.diagonal() = W.rowwise().sum();
  out.W = std::move(W);
  return out;
}

/// Laplacian at cloud X (kernel matrix evaluated here).
inline Laplacian build_laplacian(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q, const KernelSpec& spec,
                                 bool clip_negative = false) {
  if (!spec.is_gaussian())
    throw Error(ErrorCode::Unsupported, "build_laplacian: Dirichlet kernel derivative is not supported");
  return laplacian_from_kernel(gram_matrix(X, spec).values, Q, spec, clip_negative);
}

/// Analytic gradient of trace(K(X) Q) with respect to every coordinate:
/// column i is 2 sum_j Q_ij grad kappa(x_i - x_j).
inline Eigen::MatrixXd surrogate_gradient(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q, const KernelSpec& spec) {
  const Eigen::Index N = X.cols();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(X.rows(), N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j || Q(i, j) == 0.0) continue;
      grad.col(i) += (Q(i, j) + Q(j, i)) * kernel_gradient(X.col(i) - X.col(j), spec);
    }
  return grad;
}

/// Max |analytic - central difference| over all coordinates.
inline double surrogate_gradient_check(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q, const KernelSpec& spec,
                                       double step = 1e-5) {
  const Eigen::MatrixXd analytic = surrogate_gradient(X, Q, spec);
  double worst = 0.0;
  Eigen::MatrixXd Xp = X;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index d = 0; d < X.rows(); ++d) {
      const double orig = Xp(d, i);
      Xp(d, i) = orig + step;
      const double fp = surrogate_value(gram_matrix(Xp, spec).values, Q);
      Xp(d, i) = orig - step;
      const double fm = surrogate_value(gram_matrix(Xp, spec).values, Q);
      Xp(d, i) = orig;
      worst = std::max(worst, std::abs((fp - fm) / (2.0 * step) - analytic(d, i)));
    }
  return worst;
}

struct SubproblemResult {
  Eigen::MatrixXd X;
  CgResult cg;
  bool convergence_warning = false;
};

/// argmin_X ||A(X) - b||^2 + lambda trace(X L X^T). Identity operators are
/// solved in closed form, X = B (I + lambda L)^{-1}; everything else by CG on
/// A*A(X) + lambda X L = A*(b), warm-started at `warm`.
inline SubproblemResult solve_subproblem(const MeasurementOp& op, const Measurements& b, const Eigen::MatrixXd& L,
                                         double lambda, const Eigen::MatrixXd& warm, double cg_tol,
                                         int cg_max_iters) {
  const auto [n, N] = input_shape(op);
  if (L.rows() != N || L.cols() != N) throw Error(ErrorCode::InvalidInput, "solve_subproblem: Laplacian size mismatch");
  const Eigen::MatrixXd rhs = adjoint(op, b);
  SubproblemResult out;
  if (std::holds_alternative<IdentityOp>(op)) {
    if (lambda == 0.0) {
      out.X = rhs;
      out.cg.converged = true;
      return out;
    }
    Eigen::MatrixXd M = lambda * L;
    M.diagonal().array() += 1.0;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (M + M.transpose()));
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "solve_subproblem: factorization failed");
    out.X = ldlt.solve(rhs.transpose()).transpose();
    out.cg.converged = true;
    return out;
  }
  if (warm.rows() != n || warm.cols() != N) throw Error(ErrorCode::InvalidInput, "solve_subproblem: warm start shape mismatch");
  out.X = warm;
  auto apply = [&](const Eigen::MatrixXd& V) -> Eigen::MatrixXd {
    Eigen::MatrixXd r = normal_apply(op, V);
    if (lambda != 0.0) r.noalias() += lambda * V * L;
    return r;
  };
  out.cg = conjugate_gradient(apply, rhs, out.X, cg_tol, cg_max_iters);
  out.convergence_warning = !out.cg.converged;
  return out;
}

inline SubproblemResult solve_subproblem(const MeasurementOp& op, const Measurements& b, const Eigen::MatrixXd& L,
                                         double lambda, const Eigen::MatrixXd& warm, const IrlsConfig& cfg) {
  return solve_subproblem(op, b, L, lambda, warm, cfg.cg_tol, cfg.cg_max_iters);
}

struct IrlsRecord {
  int iter = 0;
  double data_term = 0.0;         // ||A(X_n) - b||^2
  double surrogate = 0.0;         // trace(K(X_n) Q_{n-1})
  double objective_before = 0.0;  // data + lambda * surrogate at X_{n-1}, same Q
  double objective_after = 0.0;   // same objective at X_n
  double nuclear_estimate = 0.0;  // sum sqrt(s_i + gamma_n) over eig(K(X_n))
  double gamma = 0.0;             // gamma used for Q_{n-1}
  double step = 1.0;              // backtracking factor applied to the Laplacian step
  int cg_iterations = 0;
  bool clipped = false;           // negative Laplacian weights were dropped
};

struct IrlsState {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd W;
  Eigen::MatrixXd L;
  double gamma = 0.0;
  std::vector<IrlsRecord> history;
  bool convergence_warning = false;
};

struct IrlsResult {
  PointCloud X;
  IrlsState state;
};

/// Exact linearization when the normal operator A*A + lambda L stays positive
/// definite with it; otherwise the PSD (clipped) Laplacian.
inline Laplacian laplacian_for_solve(const MeasurementOp& op, const Eigen::MatrixXd& K, const Eigen::MatrixXd& Q,
                                     const KernelSpec& spec, double lambda, bool& clipped) {
  Laplacian lap = laplacian_from_kernel(K, Q, spec, false);
  const double lmin = descending_eigenvalues(lap.L).tail(1)(0);
  const double floor = std::holds_alternative<IdentityOp>(op) ? -0.5 / std::max(lambda, 1e-300) : 0.0;
  clipped = lmin < floor;
  if (clipped) lap = laplacian_from_kernel(K, Q, spec, true);
  return lap;
}

inline double data_term(const MeasurementOp& op, const Measurements& b, const Eigen::MatrixXd& X) {
  return (forward(op, X) - b).squaredNorm();
}

/// Alternates Q update, Laplacian linearization and the least-squares solve.
/// A step that would increase the surrogate objective at fixed Q is
/// backtracked towards the previous iterate. On return the state's Q, W and L
/// are recomputed at the final iterate.
inline IrlsResult irls_recover(const MeasurementOp& op, const Measurements& b, const PointCloud& X0,
                               const IrlsConfig& cfg) {
  cfg.validate();
  const auto [n, N] = input_shape(op);
  if (X0.dim() != n || X0.size() != N) throw Error(ErrorCode::InvalidInput, "irls_recover: X0 shape does not match operator");
  if (b.size() != out_dim(op)) throw Error(ErrorCode::InvalidInput, "irls_recover: measurement length mismatch");
  if (b.size() == 0 && cfg.lambda == 0.0) throw Error(ErrorCode::IllPosed, "irls_recover: no measurements and lambda = 0");

  IrlsState st;
  st.X = X0.data();
  GramMatrix G = gram_matrix(st.X, cfg.kernel);
  KernelSpectrum spec(G.values);
  const double lmax0 = std::max(spec.max(), 1e-300);
  st.gamma = cfg.gamma0.value_or(0.01 * lmax0);
  const double gamma_min = cfg.gamma_min.value_or(1e-8 * lmax0);

  for (int it = 1; it <= cfg.outer_iters; ++it) {
    IrlsRecord rec;
    rec.iter = it;
    rec.gamma = st.gamma;
    st.Q = q_update(spec, st.gamma);
    Laplacian lap = laplacian_for_solve(op, G.values, st.Q, cfg.kernel, cfg.lambda, rec.clipped);
    SubproblemResult sub = solve_subproblem(op, b, lap.L, cfg.lambda, st.X, cfg);
    rec.cg_iterations = sub.cg.iterations;
    st.convergence_warning = st.convergence_warning || sub.convergence_warning;

    const double before = data_term(op, b, st.X) + cfg.lambda * surrogate_value(G.values, st.Q);
    rec.objective_before = before;
    Eigen::MatrixXd candidate = sub.X;
    GramMatrix Gc = gram_matrix(candidate, cfg.kernel);
    double after = data_term(op, b, candidate) + cfg.lambda * surrogate_value(Gc.values, st.Q);
    double step = 1.0;
    const Eigen::MatrixXd direction = sub.X - st.X;
    for (int bt = 0; bt < 40 && after > before; ++bt) {
      step *= 0.5;
      candidate = st.X + step * direction;
      Gc = gram_matrix(candidate, cfg.kernel);
      after = data_term(op, b, candidate) + cfg.lambda * surrogate_value(Gc.values, st.Q);
    }
    if (after > before) {
      step = 0.0;
      candidate = st.X;
      Gc = G;
      after = before;
    }
    rec.step = step;
    rec.objective_after = after;

    const double change = (candidate - st.X).norm() / std::max(st.X.norm(), 1e-300);
    st.X = std::move(candidate);
    G = std::move(Gc);
    spec = KernelSpectrum(G.values);
    rec.data_term = data_term(op, b, st.X);
    rec.surrogate = surrogate_value(G.values, st.Q);
    st.gamma = std::max(st.gamma / cfg.gamma_decay, gamma_min);
    rec.nuclear_estimate = nuclear_norm_estimate(spec, st.gamma);
    st.history.push_back(rec);
    if (change < cfg.change_tol) break;
  }

  st.Q = q_update(spec, st.gamma);
  Laplacian lap = laplacian_from_kernel(G.values, st.Q, cfg.kernel);
  st.W = std::move(lap.W);
  st.L = std::move(lap.L);
  PointCloud out(st.X);
  return IrlsResult{std::move(out), std::move(st)};
}

/// Median of the pairwise Euclidean distances between columns.
inline double median_pairwise_distance(const Eigen::MatrixXd& X) {
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(X.cols() * (X.cols() - 1) / 2));
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = i + 1; j < X.cols(); ++j) d.push_back((X.col(i) - X.col(j)).norm());
  if (d.empty()) return 0.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

struct TwoStepConfig {
  IrlsConfig stage1{.kernel = KernelSpec::gaussian(1.0)};  // sigma is set per call
  double lambda_stage2 = 1.0;
  int center_size = 9;
  std::optional<double> sigma;  // default: sigma_median_factor * median pairwise distance
  double sigma_median_factor = 0.5;
};

struct TwoStepResult {
  PointCloud X;
  IrlsState stage1;
  SubproblemResult stage2;
  double sigma = 0.0;
};

/// The center measurements (per frame, row-major over the center block)
/// taken from measurements of an operator whose masks contain the block.
inline Measurements extract_center_measurements(const FourierMaskOp& full, const Measurements& b_full, int center_size) {
  const BoolMatrix center = center_mask(full.height(), full.width(), center_size);
  std::vector<cdouble> out;
  Eigen::Index m = 0;
  for (Eigen::Index t = 0; t < full.frames(); ++t) {
    const BoolMatrix& mask = full.mask(t);
    for (Eigen::Index u = 0; u < full.height(); ++u)
      for (Eigen::Index v = 0; v < full.width(); ++v) {
        if (!mask(u, v)) {
          if (center(u, v)) throw Error(ErrorCode::InvalidInput, "sampling mask does not contain the center block");
          continue;
        }
        if (center(u, v)) out.push_back(b_full[m]);
        ++m;
      }
  }
  return Eigen::Map<const Measurements>(out.data(), static_cast<Eigen::Index>(out.size()));
}

/// Estimate the Laplacian by IRLS on the center k-space block, then solve the
/// Laplacian-regularized problem once with the full undersampled operator.
inline TwoStepResult two_step_recover(const Measurements& b_center, const Measurements& b_full,
                                      const FourierMaskOp& full_op, const TwoStepConfig& cfg) {
  const FourierMaskOp center_op = center_kspace_op(full_op.height(), full_op.width(), full_op.frames(), cfg.center_size);
  const MeasurementOp center(center_op);
  const MeasurementOp full(full_op);
  const PointCloud x0(adjoint(center, b_center));

  IrlsConfig stage1 = cfg.stage1;
  double sigma = cfg.sigma.value_or(cfg.sigma_median_factor * median_pairwise_distance(x0.data()));
  if (!(sigma > 0.0)) sigma = 1.0;
  stage1.kernel.sigma = sigma;
  if (stage1.kernel.family == KernelFamily::Dirichlet) stage1.kernel = KernelSpec::gaussian(sigma);

  IrlsResult est = irls_recover(center, b_center, x0, stage1);
  const Eigen::MatrixXd warm = adjoint(full, b_full);
  SubproblemResult fin = solve_subproblem(full, b_full, est.state.L, cfg.lambda_stage2, warm, stage1);
  PointCloud out(fin.X);
  return TwoStepResult{std::move(out), std::move(est.state), std::move(fin), sigma};
}

}  // namespace lskr

#endif  // LSKR_IRLS_RECOVERY_HPP
