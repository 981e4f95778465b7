#ifndef LSKR_GEOMETRY_TYPES_HPP
#define LSKR_GEOMETRY_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "lskr/error.hpp"

namespace lskr {

using cdouble = std::complex<double>;

/// Maps every coordinate into [-1/2, 1/2) by subtracting the nearest integer.
inline double wrap_coordinate(double v) {
  double w = v - std::round(v);
  // round() rounds halves away from zero, so -1/2 comes out as +1/2.
  if (w >= 0.5) w -= 1.0;
  return w;
}

/// A point on the unit torus [-1/2, 1/2)^n.
struct Point {
  Eigen::VectorXd coords;

  Eigen::Index dim() const { return coords.size(); }
};

inline Point wrap_point(const Eigen::VectorXd& p) {
  if (!p.allFinite()) throw Error(ErrorCode::InvalidInput, "wrap_point: non-finite coordinate");
  Point out{p};
  for (Eigen::Index i = 0; i < out.coords.size(); ++i) out.coords[i] = wrap_coordinate(p[i]);
  return out;
}

inline Eigen::MatrixXd wrap_matrix(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = wrap_coordinate(m.data()[i]);
  return m;
}

/// n x N matrix whose columns are points. Clouds built from torus geometry are
/// wrapped on construction through `PointCloud::wrapped`; image-series clouds
/// keep raw intensities.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd data) : data_(std::move(data)) {
    if (data_.cols() == 0) throw Error(ErrorCode::EmptyCloud, "point cloud has no points");
    if (data_.rows() == 0) throw Error(ErrorCode::InvalidInput, "point cloud has zero dimension");
    if (!data_.allFinite()) throw Error(ErrorCode::InvalidInput, "point cloud has non-finite entries");
  }

  static PointCloud wrapped(Eigen::MatrixXd data) { return PointCloud(wrap_matrix(std::move(data))); }

  const Eigen::MatrixXd& data() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  Eigen::Index size() const { return data_.cols(); }
  Point point(Eigen::Index i) const { return Point{data_.col(i)}; }

 private:
  Eigen::MatrixXd data_;
};

inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

/// Ordered set of integer frequency vectors, stored column-wise (n x |set|).
class SupportSet {
 public:
  SupportSet(Eigen::MatrixXi freqs, std::optional<int> cube_radius)
      : freqs_(std::move(freqs)), cube_radius_(cube_radius) {}

  const Eigen::MatrixXi& freqs() const { return freqs_; }
  Eigen::Index dim() const { return freqs_.rows(); }
  Eigen::Index size() const { return freqs_.cols(); }
  Eigen::VectorXi freq(Eigen::Index m) const { return freqs_.col(m); }

  /// K for a centered cube {-K..K}^n, empty otherwise.
  std::optional<int> cube_radius() const { return cube_radius_; }

  /// Position of `k` in the ordering, or -1.
  Eigen::Index index_of(const Eigen::VectorXi& k) const {
    if (k.size() != dim()) return -1;
    if (cube_radius_) {
      const int K = *cube_radius_;
      Eigen::Index idx = 0;
      for (Eigen::Index d = 0; d < dim(); ++d) {
        if (k[d] < -K || k[d] > K) return -1;
        idx = idx * (2 * K + 1) + (k[d] + K);
      }
      return idx;
    }
    for (Eigen::Index m = 0; m < size(); ++m)
      if (freqs_.col(m) == k) return m;
    return -1;
  }

  bool operator==(const SupportSet& other) const {
    return freqs_.rows() == other.freqs_.rows() && freqs_.cols() == other.freqs_.cols() &&
           freqs_ == other.freqs_;
  }

 private:
  Eigen::MatrixXi freqs_;
  std::optional<int> cube_radius_;
};

/// Centered cube {-K..K}^n in lexicographic order (first coordinate slowest).
inline SupportSet cube_support(int n, int K, std::size_t cap = kDefaultSupportCap) {
  if (n < 1 || K < 0) throw Error(ErrorCode::InvalidInput, "cube_support: need n >= 1 and K >= 0");
  const std::size_t side = static_cast<std::size_t>(2 * K + 1);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) {
    if (total > cap / side) throw Error(ErrorCode::CapacityExceeded, "cube_support: support too large");
    total *= side;
  }
  if (total > cap) throw Error(ErrorCode::CapacityExceeded, "cube_support: support too large");

  Eigen::MatrixXi freqs(n, static_cast<Eigen::Index>(total));
  Eigen::VectorXi k = Eigen::VectorXi::Constant(n, -K);
  for (std::size_t m = 0; m < total; ++m) {
    freqs.col(static_cast<Eigen::Index>(m)) = k;
    for (int d = n - 1; d >= 0; --d) {
      if (++k[d] <= K) break;
      k[d] = -K;
    }
  }
  return SupportSet(std::move(freqs), K);
}

/// |Gamma:Lambda|, the number of integer shifts t with Lambda + t inside Gamma.
inline long long translate_count(const SupportSet& gamma, const SupportSet& lambda) {
  if (!gamma.cube_radius() || !lambda.cube_radius())
    throw Error(ErrorCode::Unsupported, "translate_count: only centered cubes are supported");
  if (gamma.dim() != lambda.dim())
    throw Error(ErrorCode::InvalidInput, "translate_count: dimension mismatch");
  const int kg = *gamma.cube_radius();
  const int kl = *lambda.cube_radius();
  if (kl > kg) return 0;
  long long count = 1;
  for (Eigen::Index d = 0; d < gamma.dim(); ++d) count *= (2 * kg - 2 * kl + 1);
  return count;
}

/// Fourier-series coefficients aligned with a support ordering.
struct FourierCoeffs {
  SupportSet support;
  Eigen::VectorXcd values;
  bool conjugate_symmetric = false;

  FourierCoeffs(SupportSet s, Eigen::VectorXcd v, bool symmetric = false)
      : support(std::move(s)), values(std::move(v)), conjugate_symmetric(symmetric) {
    if (values.size() != support.size())
      throw Error(ErrorCode::InvalidInput, "FourierCoeffs: value count does not match support");
    if (conjugate_symmetric && symmetry_defect() > 1e-12 * std::max(1.0, values.norm()))
      throw Error(ErrorCode::InvalidInput, "FourierCoeffs: values are not conjugate-symmetric");
  }

  /// max_k |c_{-k} - conj(c_k)|; infinite when -k is missing from the support.
  double symmetry_defect() const {
    double worst = 0.0;
    for (Eigen::Index m = 0; m < support.size(); ++m) {
      const Eigen::Index mirror = support.index_of(-support.freq(m));
      if (mirror < 0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(values[mirror] - std::conj(values[m])));
    }
    return worst;
  }
};

enum class KernelFamily { Dirichlet, PeriodizedGaussian, Gaussian };

/// Shift-invariant kernel description. `Gaussian` is the free-space radial
/// kernel used for image-scale clouds where periodization is meaningless.
struct KernelSpec {
  KernelFamily family = KernelFamily::PeriodizedGaussian;
  std::optional<SupportSet> support;
  double sigma = 0.15;

  static KernelSpec dirichlet(SupportSet s) {
    if (s.size() == 0) throw Error(ErrorCode::InvalidInput, "Dirichlet kernel needs a non-empty support");
    if (!s.cube_radius()) throw Error(ErrorCode::Unsupported, "Dirichlet kernel needs a centered cube");
    return KernelSpec{KernelFamily::Dirichlet, std::move(s), 0.0};
  }
  static KernelSpec periodized_gaussian(double sigma) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "Gaussian sigma must be positive");
    return KernelSpec{KernelFamily::PeriodizedGaussian, std::nullopt, sigma};
  }
  static KernelSpec gaussian(double sigma) {
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "Gaussian sigma must be positive");
    return KernelSpec{KernelFamily::Gaussian, std::nullopt, sigma};
  }

  bool is_gaussian() const { return family != KernelFamily::Dirichlet; }
};

inline std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Dirichlet: return "dirichlet";
    case KernelFamily::PeriodizedGaussian: return "periodized-gaussian";
    case KernelFamily::Gaussian: return "gaussian";
  }
  return "unknown";
}

}  // namespace lskr

#endif  // LSKR_GEOMETRY_TYPES_HPP
