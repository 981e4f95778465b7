#ifndef LSKR_SYNTHDATA_HPP
#define LSKR_SYNTHDATA_HPP

// Ground-truth generators: clouds on analytic bandlimited curves, additive
// noise, and a two-parameter dynamic image series.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"

namespace lskr {

/// Dense 2-D trigonometric polynomial, coefficient (kx, ky) at (kx + K, ky + K).
class TrigPoly2 {
 public:
  explicit TrigPoly2(int radius = 0) : K_(radius), c_(Eigen::MatrixXcd::Zero(2 * radius + 1, 2 * radius + 1)) {}

  static TrigPoly2 constant(double v) {
    TrigPoly2 p(0);
    p.c_(0, 0) = v;
    return p;
  }

  /// sin^2(pi (x_axis - shift)) = 1/2 - e^{-j 2 pi shift} e^{j 2 pi x}/4 - conj/4.
  static TrigPoly2 sin_squared(int axis, double shift = 0.0) {
    TrigPoly2 p(1);
    const cdouble ph = std::polar(1.0, -2.0 * std::numbers::pi * shift);
    p.at(0, 0) = 0.5;
    if (axis == 0) {
      p.at(1, 0) = -0.25 * ph;
      p.at(-1, 0) = -0.25 * std::conj(ph);
    } else {
      p.at(0, 1) = -0.25 * ph;
      p.at(0, -1) = -0.25 * std::conj(ph);
    }
    return p;
  }

  int radius() const { return K_; }
  cdouble& at(int kx, int ky) { return c_(kx + K_, ky + K_); }
  cdouble at(int kx, int ky) const {
    if (std::abs(kx) > K_ || std::abs(ky) > K_) return 0.0;
    return c_(kx + K_, ky + K_);
  }

  friend TrigPoly2 operator+(const TrigPoly2& a, const TrigPoly2& b) {
    TrigPoly2 out(std::max(a.K_, b.K_));
    for (int x = -out.K_; x <= out.K_; ++x)
      for (int y = -out.K_; y <= out.K_; ++y) out.at(x, y) = a.at(x, y) + b.at(x, y);
    return out;
  }
  friend TrigPoly2 operator*(double s, const TrigPoly2& a) {
    TrigPoly2 out = a;
    out.c_ *= s;
    return out;
  }
  friend TrigPoly2 operator-(const TrigPoly2& a, const TrigPoly2& b) { return a + (-1.0) * b; }
  friend TrigPoly2 operator*(const TrigPoly2& a, const TrigPoly2& b) {
    TrigPoly2 out(a.K_ + b.K_);
    for (int ax = -a.K_; ax <= a.K_; ++ax)
      for (int ay = -a.K_; ay <= a.K_; ++ay)
        for (int bx = -b.K_; bx <= b.K_; ++bx)
          for (int by = -b.K_; by <= b.K_; ++by) out.at(ax + bx, ay + by) += a.at(ax, ay) * b.at(bx, by);
    return out;
  }

  FourierCoeffs to_coeffs() const {
    SupportSet s = cube_support(2, K_);
    Eigen::VectorXcd v(s.size());
    for (Eigen::Index m = 0; m < s.size(); ++m) v[m] = at(s.freqs()(0, m), s.freqs()(1, m));
    return FourierCoeffs(std::move(s), std::move(v), true);
  }

 private:
  int K_;
  Eigen::MatrixXcd c_;
};

enum class ShapeKind { CosCurve, TwoCircleUnion, Lemniscate };

struct ShapeSpec {
  ShapeKind kind;
  std::string name;
  double level = 0.0;
  FourierCoeffs coeffs;
  std::vector<Eigen::Vector2d> centers;  // ray origins for sampling

  /// cos 2 pi x + cos 2 pi y - level.
  static ShapeSpec cos_curve(double level = 1.0) {
    TrigPoly2 p(1);
    p.at(0, 0) = -level;
    p.at(1, 0) = p.at(-1, 0) = p.at(0, 1) = p.at(0, -1) = 0.5;
    const bool origin_inside = level < 2.0;
    std::vector<Eigen::Vector2d> c{origin_inside ? Eigen::Vector2d(0, 0) : Eigen::Vector2d(0.5, 0.5)};
    return ShapeSpec{ShapeKind::CosCurve, "cos-curve", level, p.to_coeffs(), c};
  }

  /// Product of two trigonometric circles sin^2(pi(x - a)) + sin^2(pi y) = r^2.
  static ShapeSpec two_circle_union(double offset = 0.2, double r = 0.45) {
    const TrigPoly2 c1 = TrigPoly2::sin_squared(0, -offset) + TrigPoly2::sin_squared(1) - TrigPoly2::constant(r * r);
    const TrigPoly2 c2 = TrigPoly2::sin_squared(0, offset) + TrigPoly2::sin_squared(1) - TrigPoly2::constant(r * r);
    return ShapeSpec{ShapeKind::TwoCircleUnion, "two-circles", 0.0, (c1 * c2).to_coeffs(),
                     {Eigen::Vector2d(-offset, 0), Eigen::Vector2d(offset, 0)}};
  }

  /// (u^2 + v^2)^2 - a^2 (u^2 - v^2) with u = sin(pi x), v = sin(pi y).
  static ShapeSpec lemniscate(double a = 0.8) {
    const TrigPoly2 u2 = TrigPoly2::sin_squared(0), v2 = TrigPoly2::sin_squared(1);
    const TrigPoly2 s = u2 + v2;
    const TrigPoly2 p = s * s - (a * a) * (u2 - v2);
    return ShapeSpec{ShapeKind::Lemniscate, "lemniscate", 0.0, p.to_coeffs(), {Eigen::Vector2d(0, 0)}};
  }

  static ShapeSpec from_name(const std::string& name, double level = 1.0) {
    if (name == "cos-curve") return cos_curve(level);
    if (name == "two-circles") return two_circle_union();
    if (name == "lemniscate") return lemniscate();
    throw Error(ErrorCode::InvalidInput, "unknown shape '" + name + "' (expected cos-curve, two-circles, lemniscate)");
  }

  double psi(const Eigen::Vector2d& x) const {
    cdouble v = 0.0;
    for (Eigen::Index m = 0; m < coeffs.support.size(); ++m) {
      const double ph = 2.0 * std::numbers::pi * (coeffs.support.freqs()(0, m) * x[0] + coeffs.support.freqs()(1, m) * x[1]);
      v += coeffs.values[m] * std::polar(1.0, ph);
    }
    return v.real();
  }
};

namespace detail {
// First root of psi along origin + t * dir for t in (t0, t_exit), refined by
// bisection to machine precision. Returns false when no sign change is found.
inline bool first_root_on_ray(const ShapeSpec& shape, const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                              Eigen::Vector2d& root) {
  double t_exit = 1e9;
  for (int d = 0; d < 2; ++d) {
    if (dir[d] > 1e-15) t_exit = std::min(t_exit, (0.5 - origin[d]) / dir[d]);
    if (dir[d] < -1e-15) t_exit = std::min(t_exit, (-0.5 - origin[d]) / dir[d]);
  }
  const double dt = 1.0 / 1024.0;
  double ta = 1e-3;
  double fa = shape.psi(origin + ta * dir);
  for (double tb = ta + dt; tb <= t_exit; tb += dt) {
    const double fb = shape.psi(origin + tb * dir);
    if ((fa < 0) != (fb < 0) || fb == 0.0) {
      double lo = ta, hi = tb, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = shape.psi(origin + mid * dir);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const Eigen::Vector2d a = origin + lo * dir, b = origin + hi * dir;
      root = std::abs(shape.psi(a)) <= std::abs(shape.psi(b)) ? a : b;
      return true;
    }
    ta = tb;
    fa = fb;
  }
  return false;
}
}  // namespace detail

/// N points on the zero set, from rays at random angles out of the shape's
/// centers followed by bisection.
inline PointCloud sample_surface(const ShapeSpec& shape, Eigen::Index N, std::uint64_t seed) {
  if (N < 1) throw Error(ErrorCode::EmptyCloud, "sample_surface: N must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<std::size_t> pick(0, shape.centers.size() - 1);
  Eigen::MatrixXd X(2, N);
  Eigen::Index filled = 0;
  long misses = 0;
  while (filled < N) {
    const double th = angle(rng);
    const Eigen::Vector2d& origin = shape.centers[pick(rng)];
    Eigen::Vector2d root;
    if (detail::first_root_on_ray(shape, origin, Eigen::Vector2d(std::cos(th), std::sin(th)), root)) {
      X.col(filled++) = root;
      misses = 0;
    } else if (++misses > 2000) {
      throw Error(ErrorCode::NoZeroSet, "sample_surface: no zero crossing found for shape " + shape.name);
    }
  }
  return PointCloud::wrapped(std::move(X));
}

/// X + N(0, std^2) per entry, re-wrapped onto the torus.
inline PointCloud add_noise(const PointCloud& X, double std_dev, std::uint64_t seed) {
  if (!(std_dev >= 0.0)) throw Error(ErrorCode::InvalidInput, "add_noise: std must be non-negative");
  if (std_dev == 0.0) return X;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std_dev);
  Eigen::MatrixXd Y = X.data();
  for (Eigen::Index i = 0; i < Y.cols(); ++i)
    for (Eigen::Index d = 0; d < Y.rows(); ++d) Y(d, i) += noise(rng);
  return PointCloud::wrapped(std::move(Y));
}

struct DynSeriesSpec {
  int height = 32;
  int width = 32;
  int num_frames = 64;
  double cardiac_freq = 0.173;  // cycles per frame
  double resp_freq = 0.031;
  double base_radius = 7.0;     // pixels
  double radius_amplitude = 1.5;
  double drift_amplitude = 3.0;
  double edge_width = 1.5;
  bool static_background = true;  // fixed body outline and vessels behind the disk

  void validate() const {
    if (height < 1 || width < 1 || num_frames < 1) throw Error(ErrorCode::InvalidInput, "DynSeriesSpec: empty series");
    if (!(edge_width > 0.0)) throw Error(ErrorCode::InvalidInput, "DynSeriesSpec: edge width must be positive");
  }
};

/// Time-invariant part of every frame, with values in [-1/2, 1/5].
inline Eigen::VectorXd static_background(const DynSeriesSpec& spec) {
  const double h = spec.height, w = spec.width;
  const double cy = 0.5 * (h - 1), cx = 0.5 * (w - 1);
  auto step = [](double signed_dist, double width) { return 0.5 * (1.0 + std::tanh(signed_dist / width)); };
  // Vessel positions relative to the frame center, in units of the frame size.
  const double vessels[][2] = {{-0.30, -0.22}, {-0.28, 0.20}, {0.30, -0.25}, {0.27, 0.24}, {0.02, -0.36}, {-0.05, 0.37}};
  Eigen::VectorXd f(spec.height * spec.width);
  for (int r = 0; r < spec.height; ++r)
    for (int c = 0; c < spec.width; ++c) {
      const double ey = (r - cy) / (0.44 * h), ex = (c - cx) / (0.40 * w);
      const double body = step(1.0 - std::hypot(ey, ex), 0.04);
      double v = -0.5 + 0.4 * body;
      const double wall = std::abs(std::hypot(ey, ex) - 0.9);
      v += 0.25 * step(0.05 - wall, 0.02);
      for (const auto& p : vessels) {
        const double d = std::hypot(r - (cy + p[0] * h), c - (cx + p[1] * w));
        v += 0.3 * step(1.6 - d, 0.5);
      }
      f[r * spec.width + c] = std::clamp(v, -0.5, 0.2);
    }
  return f;
}

/// Frame for cardiac phase c and respiratory phase r, both in [-1, 1]: a
/// bright disk with a smooth edge over the (optional) static background.
inline Eigen::VectorXd render_frame(const DynSeriesSpec& spec, double cardiac_phase, double resp_phase) {
  const double cy = 0.5 * (spec.height - 1) + spec.drift_amplitude * resp_phase;
  const double cx = 0.5 * (spec.width - 1);
  const double radius = spec.base_radius + spec.radius_amplitude * cardiac_phase;
  const Eigen::VectorXd bg = spec.static_background ? static_background(spec)
                                                    : Eigen::VectorXd::Constant(spec.height * spec.width, -0.5);
  Eigen::VectorXd f(spec.height * spec.width);
  for (int r = 0; r < spec.height; ++r)
    for (int c = 0; c < spec.width; ++c) {
      const double d = std::hypot(r - cy, c - cx);
      const double s = 0.5 * (1.0 + std::tanh((radius - d) / spec.edge_width));
      const auto idx = r * spec.width + c;
      f[idx] = (1.0 - s) * bg[idx] + 0.5 * s;
    }
  return f;
}

/// Columns are vectorized frames (row-major) with intensities in [-1/2, 1/2].
inline PointCloud make_dynamic_series(const DynSeriesSpec& spec) {
  spec.validate();
  Eigen::MatrixXd X(spec.height * spec.width, spec.num_frames);
  for (int t = 0; t < spec.num_frames; ++t) {
    const double cardiac = std::sin(2.0 * std::numbers::pi * spec.cardiac_freq * t);
    const double resp = std::sin(2.0 * std::numbers::pi * spec.resp_freq * t);
    X.col(t) = render_frame(spec, cardiac, resp);
  }
  return PointCloud(std::move(X));
}

}  // namespace lskr

#endif  // LSKR_SYNTHDATA_HPP
