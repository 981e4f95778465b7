#include <gtest/gtest.h>

#include <cmath>

#include "lskr/irls_recovery.hpp"
#include "lskr/metrics.hpp"
#include "lskr/synthdata.hpp"
#include "oracles.hpp"

using namespace lskr;

TEST(CurveDistance, OnCurvePointsAreWithinGridSpacing) {
  const ShapeSpec shape = ShapeSpec::cos_curve();
  const PointCloud X(oracle::cos_curve_points(40));
  const Eigen::VectorXd d = curve_distance(X, shape.coeffs, 512);
  EXPECT_LT(d.maxCoeff(), 2.0 / 512);
}

TEST(CurveDistance, FarPointIsFar) {
  // (1/2, 1/2) has psi = -3; along the diagonal the curve sits at (1/6, 1/6).
  Eigen::MatrixXd X(2, 1);
  X << 0.49, 0.49;
  const double d = mean_curve_distance(PointCloud(X), ShapeSpec::cos_curve().coeffs);
  EXPECT_GT(d, 0.05);
  EXPECT_NEAR(d, std::hypot(0.49 - 1.0 / 6.0, 0.49 - 1.0 / 6.0), 0.005);
}

TEST(CurveDistance, NoiseIncreasesDistance) {
  const ShapeSpec shape = ShapeSpec::cos_curve();
  const PointCloud clean = sample_surface(shape, 100, 1);
  const PointCloud noisy = add_noise(clean, 0.03, 2);
  EXPECT_LT(mean_curve_distance(clean, shape.coeffs), mean_curve_distance(noisy, shape.coeffs));
}

TEST(CurveDistance, Errors) {
  EXPECT_THROW(curve_distance(PointCloud(Eigen::MatrixXd::Zero(3, 2)), ShapeSpec::cos_curve().coeffs), Error);
  try {
    curve_distance(PointCloud(Eigen::MatrixXd::Zero(2, 2)), ShapeSpec::cos_curve(3.0).coeffs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoZeroSet);
  }
}

TEST(RelativeError, Examples) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(2, 3);
  EXPECT_DOUBLE_EQ(relative_error(A, A), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(Eigen::MatrixXd::Zero(2, 3), A), 1.0);
  EXPECT_DOUBLE_EQ(relative_error(2.0 * A, A), 1.0);
  Eigen::MatrixXd B = A;
  B(0, 0) = 4.0;  // ||diff|| = 3, ||A|| = sqrt(6)
  EXPECT_NEAR(relative_error(B, A), 3.0 / std::sqrt(6.0), 1e-15);
}

TEST(RelativeError, ScaleInvariant) {
  const Eigen::MatrixXd A = oracle::random_uniform(4, 5, -1, 1, 1);
  const Eigen::MatrixXd B = oracle::random_uniform(4, 5, -1, 1, 2);
  EXPECT_NEAR(relative_error(7.0 * B, 7.0 * A), relative_error(B, A), 1e-14);
}

TEST(RelativeError, Errors) {
  try {
    relative_error(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Zero(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
  EXPECT_THROW(relative_error(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 3)), Error);
}

TEST(Rmse, Example) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd B = A;
  B(1, 1) = 2.0;
  EXPECT_DOUBLE_EQ(rmse(B, A), 1.0);
}
