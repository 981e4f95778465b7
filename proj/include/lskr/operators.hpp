#ifndef LSKR_OPERATORS_HPP
#define LSKR_OPERATORS_HPP

// Linear measurement operators A acting on real n x N clouds. Measurements
// are complex; the inner product on both sides is the real part of the
// Hermitian product, so adjoint(y) is real.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>
#include <vector>

#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"

namespace lskr {

using Measurements = Eigen::VectorXcd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct IdentityOp {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// Keeps the entries where mask(d, i) is true, in column-major order.
struct EntryMaskOp {
  BoolMatrix mask;
};

/// Per-column 2-D unitary DFT of the h x w frame (pixel (r, c) at row r * w + c),
/// sampled at that column's frequency mask (index (u, v), u in [0, h)).
class FourierMaskOp {
 public:
  FourierMaskOp(Eigen::Index h, Eigen::Index w, std::vector<BoolMatrix> masks)
      : h_(h), w_(w), masks_(std::move(masks)) {
    if (h < 1 || w < 1) throw Error(ErrorCode::InvalidInput, "FourierMaskOp: empty frame shape");
    for (const auto& m : masks_)
      if (m.rows() != h || m.cols() != w) throw Error(ErrorCode::InvalidInput, "FourierMaskOp: mask shape mismatch");
    fh_ = dft_matrix(h);
    fw_ = dft_matrix(w);
  }

  Eigen::Index height() const { return h_; }
  Eigen::Index width() const { return w_; }
  Eigen::Index frames() const { return static_cast<Eigen::Index>(masks_.size()); }
  const std::vector<BoolMatrix>& masks() const { return masks_; }
  const BoolMatrix& mask(Eigen::Index t) const { return masks_[static_cast<std::size_t>(t)]; }

  Eigen::MatrixXcd frame_spectrum(const Eigen::Ref<const Eigen::VectorXd>& column) const {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor frame = Eigen::Map<const RowMajor>(column.data(), h_, w_);
    return fh_ * frame.cast<cdouble_t>() * fw_;
  }

  Eigen::VectorXd frame_from_spectrum(const Eigen::MatrixXcd& spectrum) const {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor frame = (fh_.adjoint() * spectrum * fw_.adjoint()).real();
    return Eigen::Map<const Eigen::VectorXd>(frame.data(), h_ * w_);
  }

  /// Signed frequency of DFT index u on an axis of length len.
  static int signed_freq(Eigen::Index u, Eigen::Index len) {
    return static_cast<int>(u < (len + 1) / 2 ? u : u - len);
  }

 private:
  using cdouble_t = std::complex<double>;

  static Eigen::MatrixXcd dft_matrix(Eigen::Index len) {
    Eigen::MatrixXcd F(len, len);
    const double scale = 1.0 / std::sqrt(static_cast<double>(len));
    for (Eigen::Index u = 0; u < len; ++u)
      for (Eigen::Index r = 0; r < len; ++r)
        F(u, r) = std::polar(scale, -2.0 * std::numbers::pi * static_cast<double>((u * r) % len) / double(len));
    return F;
  }

  Eigen::Index h_, w_;
  std::vector<BoolMatrix> masks_;
  Eigen::MatrixXcd fh_, fw_;
};

using MeasurementOp = std::variant<IdentityOp, EntryMaskOp, FourierMaskOp>;

inline Eigen::Index out_dim(const MeasurementOp& op) {
  struct {
    Eigen::Index operator()(const IdentityOp& o) const { return o.rows * o.cols; }
    Eigen::Index operator()(const EntryMaskOp& o) const { return o.mask.count(); }
    Eigen::Index operator()(const FourierMaskOp& o) const {
      Eigen::Index total = 0;
      for (const auto& m : o.masks()) total += m.count();
      return total;
    }
  } visitor;
  return std::visit(visitor, op);
}

/// Shape (n, N) of the clouds the operator accepts.
inline std::pair<Eigen::Index, Eigen::Index> input_shape(const MeasurementOp& op) {
  struct {
    std::pair<Eigen::Index, Eigen::Index> operator()(const IdentityOp& o) const { return {o.rows, o.cols}; }
    std::pair<Eigen::Index, Eigen::Index> operator()(const EntryMaskOp& o) const {
      return {o.mask.rows(), o.mask.cols()};
    }
    std::pair<Eigen::Index, Eigen::Index> operator()(const FourierMaskOp& o) const {
      return {o.height() * o.width(), o.frames()};
    }
  } visitor;
  return std::visit(visitor, op);
}

inline Measurements forward(const MeasurementOp& op, const Eigen::MatrixXd& X) {
  const auto [n, N] = input_shape(op);
  if (X.rows() != n || X.cols() != N) throw Error(ErrorCode::InvalidInput, "forward: cloud shape does not match operator");
  Measurements y(out_dim(op));
  if (std::holds_alternative<IdentityOp>(op)) {
    y = Eigen::Map<const Eigen::VectorXd>(X.data(), X.size()).cast<cdouble>();
  } else if (const auto* em = std::get_if<EntryMaskOp>(&op)) {
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index d = 0; d < n; ++d)
        if (em->mask(d, i)) y[m++] = X(d, i);
  } else {
    const auto& fm = std::get<FourierMaskOp>(op);
    Eigen::Index m = 0;
    for (Eigen::Index t = 0; t < N; ++t) {
      const BoolMatrix& mask = fm.mask(t);
      if (mask.count() == 0) continue;
      const Eigen::MatrixXcd spec = fm.frame_spectrum(X.col(t));
      for (Eigen::Index u = 0; u < fm.height(); ++u)
        for (Eigen::Index v = 0; v < fm.width(); ++v)
          if (mask(u, v)) y[m++] = spec(u, v);
    }
  }
  return y;
}

inline Eigen::MatrixXd adjoint(const MeasurementOp& op, const Measurements& y) {
  if (y.size() != out_dim(op)) throw Error(ErrorCode::InvalidInput, "adjoint: measurement length does not match operator");
  const auto [n, N] = input_shape(op);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, N);
  if (std::holds_alternative<IdentityOp>(op)) {
    X = Eigen::Map<const Eigen::MatrixXd>(y.real().eval().data(), n, N);
  } else if (const auto* em = std::get_if<EntryMaskOp>(&op)) {
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index d = 0; d < n; ++d)
        if (em->mask(d, i)) X(d, i) = y[m++].real();
  } else {
    const auto& fm = std::get<FourierMaskOp>(op);
    Eigen::Index m = 0;
    for (Eigen::Index t = 0; t < N; ++t) {
      const BoolMatrix& mask = fm.mask(t);
      if (mask.count() == 0) continue;
      Eigen::MatrixXcd spec = Eigen::MatrixXcd::Zero(fm.height(), fm.width());
      for (Eigen::Index u = 0; u < fm.height(); ++u)
        for (Eigen::Index v = 0; v < fm.width(); ++v)
          if (mask(u, v)) spec(u, v) = y[m++];
      X.col(t) = fm.frame_from_spectrum(spec);
    }
  }
  return X;
}

/// A*A(X) without materializing the measurement vector layout.
inline Eigen::MatrixXd normal_apply(const MeasurementOp& op, const Eigen::MatrixXd& X) {
  if (std::holds_alternative<IdentityOp>(op)) return X;
  if (const auto* em = std::get_if<EntryMaskOp>(&op)) return em->mask.select(X, 0.0 * X);
  const auto& fm = std::get<FourierMaskOp>(op);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), X.cols());
  for (Eigen::Index t = 0; t < X.cols(); ++t) {
    const BoolMatrix& mask = fm.mask(t);
    if (mask.count() == 0) continue;
    Eigen::MatrixXcd spec = fm.frame_spectrum(X.col(t));
    for (Eigen::Index u = 0; u < fm.height(); ++u)
      for (Eigen::Index v = 0; v < fm.width(); ++v)
        if (!mask(u, v)) spec(u, v) = 0.0;
    out.col(t) = fm.frame_from_spectrum(spec);
  }
  return out;
}

/// Real part of <a, b> = sum conj(a_i) b_i.
inline double real_inner(const Measurements& a, const Measurements& b) { return a.dot(b).real(); }

namespace detail {
inline bool in_center(Eigen::Index u, Eigen::Index v, Eigen::Index h, Eigen::Index w, int center) {
  const int lo = -(center / 2), hi = center - center / 2 - 1;
  const int fu = FourierMaskOp::signed_freq(u, h), fv = FourierMaskOp::signed_freq(v, w);
  return fu >= lo && fu <= hi && fv >= lo && fv <= hi;
}
}  // namespace detail

inline BoolMatrix center_mask(Eigen::Index h, Eigen::Index w, int center_size) {
  BoolMatrix m(h, w);
  for (Eigen::Index u = 0; u < h; ++u)
    for (Eigen::Index v = 0; v < w; ++v) m(u, v) = detail::in_center(u, v, h, w, center_size);
  return m;
}

/// Same centered center_size x center_size low-frequency block in every frame.
inline FourierMaskOp center_kspace_op(Eigen::Index h, Eigen::Index w, Eigen::Index frames, int center_size) {
  if (center_size < 1 || center_size > std::min(h, w))
    throw Error(ErrorCode::InvalidInput, "center_kspace_op: center size must be in [1, min(h, w)]");
  return FourierMaskOp(h, w, std::vector<BoolMatrix>(static_cast<std::size_t>(frames), center_mask(h, w, center_size)));
}

/// Per-frame random Cartesian masks: the center block is always kept, the
/// remaining samples are drawn without replacement with density 1/(1 + |f|)
/// until round(h * w / acceleration) samples per frame are reached.
inline FourierMaskOp variable_density_op(Eigen::Index h, Eigen::Index w, Eigen::Index frames, double acceleration,
                                         int center_size, std::uint64_t seed) {
  if (!(acceleration >= 1.0)) throw Error(ErrorCode::InvalidInput, "variable_density_op: acceleration must be >= 1");
  const BoolMatrix center = center_mask(h, w, center_size);
  const Eigen::Index target = std::max<Eigen::Index>(
      center.count(), static_cast<Eigen::Index>(std::llround(double(h * w) / acceleration)));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<BoolMatrix> masks;
  masks.reserve(static_cast<std::size_t>(frames));
  for (Eigen::Index t = 0; t < frames; ++t) {
    BoolMatrix m = center;
    // Weighted sampling without replacement via keys u^(1/weight).
    std::vector<std::pair<double, Eigen::Index>> keys;
    for (Eigen::Index u = 0; u < h; ++u)
      for (Eigen::Index v = 0; v < w; ++v) {
        const double draw = unif(rng);
        if (m(u, v)) continue;
        const double fu = FourierMaskOp::signed_freq(u, h), fv = FourierMaskOp::signed_freq(v, w);
        const double weight = 1.0 / (1.0 + std::hypot(fu, fv));
        keys.emplace_back(std::log(draw) / weight, u * w + v);
      }
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    const Eigen::Index extra = std::min<Eigen::Index>(target - m.count(), static_cast<Eigen::Index>(keys.size()));
    for (Eigen::Index k = 0; k < extra; ++k) {
      const Eigen::Index idx = keys[static_cast<std::size_t>(k)].second;
      m(idx / w, idx % w) = true;
    }
    masks.push_back(std::move(m));
  }
  return FourierMaskOp(h, w, std::move(masks));
}

inline EntryMaskOp random_entry_mask(Eigen::Index n, Eigen::Index N, double keep_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BoolMatrix mask(n, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index d = 0; d < n; ++d) mask(d, i) = unif(rng) < keep_fraction;
  return EntryMaskOp{std::move(mask)};
}

}  // namespace lskr

#endif  // LSKR_OPERATORS_HPP
