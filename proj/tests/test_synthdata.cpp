#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lskr/feature_space.hpp"
#include "lskr/synthdata.hpp"
#include "oracles.hpp"

using namespace lskr;

namespace {

double sin2(double t) { return std::pow(std::sin(std::numbers::pi * t), 2); }

double two_circles_closed_form(double x, double y, double a, double r) {
  return (sin2(x - a) + sin2(y) - r * r) * (sin2(x + a) + sin2(y) - r * r);
}

double lemniscate_closed_form(double x, double y, double a) {
  const double u = sin2(x), v = sin2(y);
  return (u + v) * (u + v) - a * a * (u - v);
}

}  // namespace

TEST(Shapes, CosCurveCoefficientsMatchClosedForm) {
  const ShapeSpec s = ShapeSpec::cos_curve();
  const Eigen::MatrixXd P = oracle::random_uniform(2, 50, -0.5, 0.5, 1);
  for (Eigen::Index i = 0; i < P.cols(); ++i)
    EXPECT_NEAR(s.psi(P.col(i)), oracle::cos_curve_psi(P(0, i), P(1, i)), 1e-12);
  EXPECT_EQ(s.coeffs.support.size(), 9);
}

TEST(Shapes, OtherShapesMatchClosedForms) {
  const ShapeSpec tc = ShapeSpec::two_circle_union(0.2, 0.45);
  const ShapeSpec lm = ShapeSpec::lemniscate(0.8);
  const Eigen::MatrixXd P = oracle::random_uniform(2, 50, -0.5, 0.5, 2);
  for (Eigen::Index i = 0; i < P.cols(); ++i) {
    EXPECT_NEAR(tc.psi(P.col(i)), two_circles_closed_form(P(0, i), P(1, i), 0.2, 0.45), 1e-12);
    EXPECT_NEAR(lm.psi(P.col(i)), lemniscate_closed_form(P(0, i), P(1, i), 0.8), 1e-12);
  }
}

TEST(Shapes, FromName) {
  EXPECT_EQ(ShapeSpec::from_name("cos-curve").kind, ShapeKind::CosCurve);
  EXPECT_EQ(ShapeSpec::from_name("two-circles").kind, ShapeKind::TwoCircleUnion);
  EXPECT_EQ(ShapeSpec::from_name("lemniscate").kind, ShapeKind::Lemniscate);
  try {
    ShapeSpec::from_name("ellipse");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(SampleSurface, PointsLieOnZeroSet) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 200, 3);
  ASSERT_EQ(X.size(), 200);
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    EXPECT_LT(std::abs(oracle::cos_curve_psi(X.data()(0, i), X.data()(1, i))), 1e-12);
    EXPECT_GE(X.data()(0, i), -0.5);
    EXPECT_LT(X.data()(0, i), 0.5);
  }
}

TEST(SampleSurface, OtherShapesResidual) {
  const PointCloud A = sample_surface(ShapeSpec::two_circle_union(), 100, 4);
  const PointCloud B = sample_surface(ShapeSpec::lemniscate(), 100, 5);
  for (Eigen::Index i = 0; i < 100; ++i) {
    EXPECT_LT(std::abs(two_circles_closed_form(A.data()(0, i), A.data()(1, i), 0.2, 0.45)), 1e-10);
    EXPECT_LT(std::abs(lemniscate_closed_form(B.data()(0, i), B.data()(1, i), 0.8)), 1e-10);
  }
}

TEST(SampleSurface, SinglePointAndEmpty) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 1, 9);
  ASSERT_EQ(X.size(), 1);
  EXPECT_LT(std::abs(oracle::cos_curve_psi(X.data()(0, 0), X.data()(1, 0))), 1e-12);
  try {
    sample_surface(ShapeSpec::cos_curve(), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCloud);
  }
}

TEST(SampleSurface, DeterministicPerSeed) {
  const PointCloud a = sample_surface(ShapeSpec::lemniscate(), 50, 7);
  const PointCloud b = sample_surface(ShapeSpec::lemniscate(), 50, 7);
  const PointCloud c = sample_surface(ShapeSpec::lemniscate(), 50, 8);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_NE(a.data(), c.data());
}

TEST(SampleSurface, FeatureRankBoundedByCoefficientCount) {
  // Each point annihilates the 9 shifts of the degree-1 polynomial that fit in
  // the 5x5 cube, so rank <= 25 - 9.
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 60, 10);
  const Eigen::VectorXd s = feature_singular_values(feature_matrix(X, cube_support(2, 2)));
  const Eigen::VectorXd gram_eigs = s.cwiseProduct(s);
  EXPECT_EQ(numerical_rank(gram_eigs, 1e-8), 16);
}

TEST(SampleSurface, NoZeroSet) {
  // cos + cos never reaches 3.
  try {
    sample_surface(ShapeSpec::cos_curve(3.0), 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoZeroSet);
  }
}

TEST(AddNoise, ZeroStdIsIdentity) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 30, 1);
  EXPECT_EQ(add_noise(X, 0.0, 5).data(), X.data());
  EXPECT_THROW(add_noise(X, -1.0, 5), Error);
}

TEST(AddNoise, MovesPointsOffCurve) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 200, 1);
  const PointCloud Y = add_noise(X, 0.03, 2);
  double clean = 0.0, noisy = 0.0;
  for (Eigen::Index i = 0; i < 200; ++i) {
    clean += std::abs(oracle::cos_curve_psi(X.data()(0, i), X.data()(1, i)));
    noisy += std::abs(oracle::cos_curve_psi(Y.data()(0, i), Y.data()(1, i)));
  }
  EXPECT_GT(noisy, 10.0 * clean + 1e-3);
  // Sample std of the displacement, modulo the wrap.
  Eigen::MatrixXd D = Y.data() - X.data();
  D = D.unaryExpr([](double v) { return v - std::round(v); });
  const double sd = std::sqrt(D.squaredNorm() / static_cast<double>(D.size()));
  EXPECT_NEAR(sd, 0.03, 0.005);
  EXPECT_EQ(add_noise(X, 0.03, 2).data(), Y.data());
}

TEST(DynamicSeries, ShapeAndRange) {
  DynSeriesSpec spec;
  const PointCloud X = make_dynamic_series(spec);
  EXPECT_EQ(X.dim(), 32 * 32);
  EXPECT_EQ(X.size(), 64);
  EXPECT_GE(X.data().minCoeff(), -0.5);
  EXPECT_LE(X.data().maxCoeff(), 0.5);
  EXPECT_EQ(make_dynamic_series(spec).data(), X.data());
}

TEST(DynamicSeries, LowEffectiveRank) {
  const PointCloud X = make_dynamic_series(DynSeriesSpec{});
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.data());
  const Eigen::VectorXd s = svd.singularValues();
  EXPECT_LE(numerical_rank(s.cwiseProduct(s), 1e-3), 25);
}

TEST(DynamicSeries, StaticWhenAmplitudesVanish) {
  DynSeriesSpec spec;
  spec.radius_amplitude = 0.0;
  spec.drift_amplitude = 0.0;
  const PointCloud X = make_dynamic_series(spec);
  for (Eigen::Index t = 1; t < X.size(); ++t) EXPECT_EQ(X.data().col(t), X.data().col(0));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.data());
  EXPECT_EQ(numerical_rank(svd.singularValues(), 1e-12), 1);
}

TEST(DynamicSeries, RepeatedPhasesGiveRepeatedFrames) {
  DynSeriesSpec spec;
  spec.cardiac_freq = 0.25;
  spec.resp_freq = 0.5;
  spec.num_frames = 8;
  const PointCloud X = make_dynamic_series(spec);
  EXPECT_LT((X.data().col(0) - X.data().col(4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DynamicSeries, Validation) {
  DynSeriesSpec spec;
  spec.num_frames = 0;
  EXPECT_THROW(make_dynamic_series(spec), Error);
  spec = DynSeriesSpec{};
  spec.edge_width = 0.0;
  EXPECT_THROW(spec.validate(), Error);
}
