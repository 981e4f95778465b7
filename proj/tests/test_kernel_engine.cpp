#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lskr/feature_space.hpp"
#include "lskr/kernel_engine.hpp"
#include "lskr/parallel.hpp"
#include "lskr/synthdata.hpp"
#include "oracles.hpp"

using namespace lskr;

namespace {
constexpr double kPi = std::numbers::pi;

double direct_periodized_gaussian(const Eigen::VectorXd& r, double sigma) {
  // Generous image sum, independent of the library's layer count.
  double v = 1.0;
  for (Eigen::Index d = 0; d < r.size(); ++d) {
    double s = 0.0;
    for (int m = -40; m <= 40; ++m) s += std::exp(-(r[d] + m) * (r[d] + m) / (2 * sigma * sigma));
    v *= s;
  }
  return v;
}
}  // namespace

TEST(KernelEval, DirichletAtZeroIsSupportSize) {
  EXPECT_DOUBLE_EQ(kernel_eval(Eigen::Vector2d(0, 0), KernelSpec::dirichlet(cube_support(2, 2))), 25.0);
}

TEST(KernelEval, DirichletHalfShift) {
  EXPECT_NEAR(kernel_eval(Eigen::VectorXd::Constant(1, 0.5), KernelSpec::dirichlet(cube_support(1, 1))), -1.0, 1e-14);
}

TEST(KernelEval, DirichletMatchesCosineSum) {
  const KernelSpec spec = KernelSpec::dirichlet(cube_support(2, 3));
  const Eigen::MatrixXd R = oracle::random_uniform(2, 200, -2.0, 2.0, 5);
  for (Eigen::Index i = 0; i < R.cols(); ++i) {
    double direct = 0.0;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) direct += std::cos(2 * kPi * (a * R(0, i) + b * R(1, i)));
    EXPECT_NEAR(kernel_eval(R.col(i), spec), direct, 1e-10);
  }
}

TEST(KernelEval, DirichletRemovableSingularity) {
  const KernelSpec spec = KernelSpec::dirichlet(cube_support(1, 4));
  EXPECT_DOUBLE_EQ(kernel_eval(Eigen::VectorXd::Constant(1, 1.0), spec), 9.0);
  EXPECT_DOUBLE_EQ(kernel_eval(Eigen::VectorXd::Constant(1, -3.0), spec), 9.0);
  EXPECT_NEAR(kernel_eval(Eigen::VectorXd::Constant(1, 1e-9), spec), 9.0, 1e-12);
  EXPECT_NEAR(kernel_eval(Eigen::VectorXd::Constant(1, 2e-8), spec), 9.0, 1e-10);
}

TEST(KernelEval, GaussianPeakToCornerRatio) {
  const KernelSpec spec = KernelSpec::periodized_gaussian(0.15);
  const double peak = kernel_eval(Eigen::Vector2d(0, 0), spec);
  const double corner = kernel_eval(Eigen::Vector2d(0.5, 0.5), spec);
  EXPECT_GT(peak / corner, 1e3);
  EXPECT_NEAR(peak, direct_periodized_gaussian(Eigen::Vector2d(0, 0), 0.15), 1e-14);
  EXPECT_NEAR(corner, direct_periodized_gaussian(Eigen::Vector2d(0.5, 0.5), 0.15), 1e-14);
}

TEST(KernelEval, PeriodizedGaussianTruncationError) {
  for (double sigma : {0.05, 0.15, 0.5, 1.0, 2.0}) {
    const KernelSpec spec = KernelSpec::periodized_gaussian(sigma);
    const Eigen::MatrixXd R = oracle::random_uniform(2, 30, -0.5, 0.5, 12);
    for (Eigen::Index i = 0; i < R.cols(); ++i) {
      const double ref = direct_periodized_gaussian(R.col(i), sigma);
      EXPECT_LT(std::abs(kernel_eval(R.col(i), spec) - ref), 1e-12 * ref) << "sigma " << sigma;
    }
  }
}

TEST(KernelEval, FreeSpaceGaussian) {
  const KernelSpec spec = KernelSpec::gaussian(2.0);
  EXPECT_DOUBLE_EQ(kernel_eval(Eigen::Vector3d(0, 0, 0), spec), 1.0);
  EXPECT_NEAR(kernel_eval(Eigen::Vector3d(2, 0, 0), spec), std::exp(-0.5), 1e-15);
}

TEST(KernelGradient, MatchesFiniteDifferences) {
  for (const KernelSpec& spec : {KernelSpec::periodized_gaussian(0.15), KernelSpec::gaussian(0.7)}) {
    const Eigen::MatrixXd R = oracle::random_uniform(3, 20, -0.5, 0.5, 3);
    for (Eigen::Index i = 0; i < R.cols(); ++i) {
      const Eigen::VectorXd g = kernel_gradient(R.col(i), spec);
      for (int d = 0; d < 3; ++d) {
        Eigen::VectorXd p = R.col(i), m = R.col(i);
        p[d] += 1e-6;
        m[d] -= 1e-6;
        EXPECT_NEAR(g[d], (kernel_eval(p, spec) - kernel_eval(m, spec)) / 2e-6, 1e-6);
      }
    }
  }
  EXPECT_THROW(kernel_gradient(Eigen::Vector2d(0.1, 0.1), KernelSpec::dirichlet(cube_support(2, 1))), Error);
}

TEST(GramMatrix, DirichletEqualsExplicitMaps) {
  const PointCloud X(oracle::random_uniform(2, 30, -0.5, 0.5, 77));
  for (int K : {1, 3, 7, 20, 49}) {
    const GramMatrix G = gram_matrix(X, KernelSpec::dirichlet(cube_support(2, K)));
    EXPECT_LT((G.values - oracle::explicit_dirichlet_gram(X.data(), K)).cwiseAbs().maxCoeff(), 1e-10) << "K=" << K;
  }
}

TEST(GramMatrix, GaussianEqualsWeightedMapLimit) {
  const PointCloud X(oracle::random_uniform(2, 25, -0.5, 0.5, 8));
  for (double sigma : {0.1, 0.15, 0.25}) {
    const int K = static_cast<int>(std::ceil(3.0 / (kPi * sigma))) + 2;
    const FeatureMatrix F = feature_matrix(X, cube_support(2, K), sigma);
    const Eigen::MatrixXd FF = (F.values.adjoint() * F.values).real() * gaussian_fourier_scale(sigma, 2);
    const Eigen::MatrixXd G = gram_matrix(X, KernelSpec::periodized_gaussian(sigma)).values;
    EXPECT_LT((FF - G).cwiseAbs().maxCoeff(), 1e-6) << "sigma " << sigma;
    EXPECT_LT((oracle::fourier_gaussian_gram(X.data(), sigma, K) - G).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(GramMatrix, EffectiveBandwidthTruncation) {
  const PointCloud X(oracle::random_uniform(2, 40, -0.5, 0.5, 9));
  for (double sigma : {0.1, 0.15, 0.25}) {
    const int K = static_cast<int>(std::ceil(3.0 / (kPi * sigma)));
    const FeatureMatrix F = feature_matrix(X, cube_support(2, K), sigma);
    const Eigen::MatrixXd FF = (F.values.adjoint() * F.values).real() * gaussian_fourier_scale(sigma, 2);
    const Eigen::MatrixXd G = gram_matrix(X, KernelSpec::periodized_gaussian(sigma)).values;
    EXPECT_LT((FF - G).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff(), 1e-4) << "sigma " << sigma;
  }
}

TEST(GramMatrix, SinglePoint) {
  const GramMatrix G = gram_matrix(PointCloud(Eigen::MatrixXd::Constant(2, 1, 0.3)), KernelSpec::dirichlet(cube_support(2, 1)));
  ASSERT_EQ(G.size(), 1);
  EXPECT_DOUBLE_EQ(G.values(0, 0), 9.0);
}

TEST(GramMatrix, SymmetricConstantDiagonalPsd) {
  const PointCloud X(oracle::random_uniform(2, 60, -0.5, 0.5, 10));
  for (const KernelSpec& spec : {KernelSpec::dirichlet(cube_support(2, 2)), KernelSpec::periodized_gaussian(0.15),
                                 KernelSpec::gaussian(0.3)}) {
    const Eigen::MatrixXd& K = gram_matrix(X, spec).values;
    EXPECT_EQ(K, K.transpose());
    EXPECT_NEAR((K.diagonal().array() - K(0, 0)).abs().maxCoeff(), 0.0, 1e-12);
    const Eigen::VectorXd ev = descending_eigenvalues(K);
    EXPECT_GE(ev[ev.size() - 1], -1e-9 * ev[0]);
  }
}

TEST(GramMatrix, ShiftInvariance) {
  const Eigen::MatrixXd X = oracle::random_uniform(2, 40, -0.5, 0.5, 13);
  const Eigen::MatrixXd Y = wrap_matrix(X.colwise() + Eigen::Vector2d(0.37, -0.81));
  for (const KernelSpec& spec : {KernelSpec::dirichlet(cube_support(2, 3)), KernelSpec::periodized_gaussian(0.15)})
    EXPECT_LT((gram_matrix(X, spec).values - gram_matrix(Y, spec).values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GramMatrix, CapacityLimit) {
  try {
    gram_matrix(Eigen::MatrixXd::Zero(1, kMaxGramPoints + 1), KernelSpec::gaussian(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityExceeded);
  }
}

TEST(GramMatrix, ThreadCountDoesNotChangeValues) {
  const Eigen::MatrixXd X = oracle::random_uniform(2, 90, -0.5, 0.5, 14);
  const KernelSpec spec = KernelSpec::periodized_gaussian(0.2);
  const int saved = num_threads();
  set_num_threads(1);
  const Eigen::MatrixXd a = gram_matrix(X, spec).values;
  set_num_threads(4);
  const Eigen::MatrixXd b = gram_matrix(X, spec).values;
  set_num_threads(saved);
  EXPECT_EQ(a, b);
}

TEST(RankProfile, CosCurveRankBound) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 60, 1);
  const RankProfile p = kernel_rank_profile(gram_matrix(X, KernelSpec::dirichlet(cube_support(2, 2))), {1e-8});
  EXPECT_LE(p.ranks[0], 25 - oracle::brute_force_translate_count(2, 2, 1));
  for (Eigen::Index i = 1; i < p.eigenvalues.size(); ++i) EXPECT_LE(p.eigenvalues[i], p.eigenvalues[i - 1]);
}

TEST(RankProfile, NoiseRaisesRank) {
  const PointCloud X = sample_surface(ShapeSpec::cos_curve(), 60, 1);
  const KernelSpec spec = KernelSpec::dirichlet(cube_support(2, 2));
  const auto clean = kernel_rank_profile(gram_matrix(X, spec), {1e-3});
  const auto noisy = kernel_rank_profile(gram_matrix(add_noise(X, 0.02, 2), spec), {1e-3});
  EXPECT_GT(noisy.ranks[0], clean.ranks[0]);
}

TEST(RankProfile, GenericPointsHaveFullRank) {
  const PointCloud X(oracle::random_uniform(2, 20, -0.5, 0.5, 15));
  const auto p = kernel_rank_profile(gram_matrix(X, KernelSpec::dirichlet(cube_support(2, 2))), {1e-8});
  EXPECT_EQ(p.ranks[0], 20);
}
