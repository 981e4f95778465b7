#ifndef LSKR_CONJUGATE_GRADIENT_HPP
#define LSKR_CONJUGATE_GRADIENT_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace lskr {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradient for apply(X) = rhs with a symmetric positive
/// (semi)definite operator on matrices under the Frobenius inner product.
/// `x` holds the warm start on entry and the best iterate on exit.
template <typename Apply>
CgResult conjugate_gradient(Apply&& apply, const Eigen::MatrixXd& rhs, Eigen::MatrixXd& x, double tol,
                            int max_iters) {
  CgResult res;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  Eigen::MatrixXd r = rhs - apply(x);
  double rr = r.squaredNorm();
  Eigen::MatrixXd best = x;
  double best_rr = rr;
  Eigen::MatrixXd p = r;
  while (std::sqrt(rr) / rhs_norm > tol && res.iterations < max_iters) {
    const Eigen::MatrixXd Ap = apply(p);
    const double pAp = (p.array() * Ap.array()).sum();
    if (!(pAp > 0.0)) break;
    const double alpha = rr / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    const double rr_new = r.squaredNorm();
    ++res.iterations;
    if (rr_new < best_rr) {
      best_rr = rr_new;
      best = x;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  x = best;
  res.relative_residual = std::sqrt(best_rr) / rhs_norm;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace lskr

#endif  // LSKR_CONJUGATE_GRADIENT_HPP
