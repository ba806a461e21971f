#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fedsel/debias.hpp"
#include "fedsel/error.hpp"
#include "oracles.hpp"

using namespace fedsel;

namespace {

Dataset make_dataset(Matrix X, Vector y) {
  Dataset ds;
  ds.X = std::move(X);
  ds.y = std::move(y);
  return ds;
}

}  // namespace

TEST(Nodewise, OrthogonalColumnsGiveZero) {
  std::mt19937_64 rng(1);
  const Matrix X = oracle::orthogonal_design(40, 6, 40.0, rng);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto r = nodewise_regression(X, i, 0.1);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.gamma.size(), 5);
    EXPECT_LT(r.gamma.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Nodewise, CollinearPair) {
  std::mt19937_64 rng(2);
  Matrix X(30, 2);
  X.col(0) = oracle::gaussian_vector(30, rng);
  X.col(1) = X.col(0);
  LassoOptions opts;
  opts.tol = 1e-12;
  const auto r = nodewise_regression(X, 1, 0.0, opts);
  EXPECT_NEAR(r.gamma[0], 1.0, 1e-9);
}

TEST(Nodewise, SatisfiesScaledKkt) {
  std::mt19937_64 rng(3);
  const std::size_t n = 200, p = 10;
  const Matrix X = oracle::gaussian_matrix(n, p, rng);
  const double lt = lambda_tilde_theory(n, p, 2.0);
  for (std::size_t i = 0; i < p; ++i) {
    const auto r = nodewise_regression(X, i, lt);
    ASSERT_TRUE(r.converged);
    Matrix rest(n, p - 1);
    for (std::size_t c = 0, k = 0; c < p; ++c)
      if (c != i) rest.col(static_cast<Eigen::Index>(k++)) = X.col(static_cast<Eigen::Index>(c));
    // (1/2n) objective <=> unscaled objective with penalty 2 n lambda_tilde.
    const double lambda = 2.0 * n * lt;
    const Vector xi = X.col(static_cast<Eigen::Index>(i));
    const double scale = lambda + (rest.transpose() * xi).cwiseAbs().maxCoeff();
    EXPECT_LE(oracle::kkt_violation(rest, xi, r.gamma, lambda), 1e-8 * scale * (1 + 1e-9));
  }
}

TEST(BuildM, IdentityGram) {
  std::mt19937_64 rng(4);
  const Matrix X = oracle::orthogonal_design(50, 5, 50.0, rng);
  const Matrix M = build_M(X, 0.2);
  EXPECT_LT((M - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildM, SingleColumn) {
  Matrix X(4, 1);
  X << 1.0, -2.0, 0.5, 3.0;
  const Matrix M = build_M(X, 0.3);
  EXPECT_NEAR(M(0, 0), 4.0 / X.squaredNorm(), 1e-15);
}

TEST(BuildM, StructureMatchesNodewiseFits) {
  std::mt19937_64 rng(5);
  const std::size_t n = 60, p = 8;
  const Matrix X = oracle::gaussian_matrix(n, p, rng);
  const double lt = 0.1;
  BuildMOptions opts;
  opts.jobs = 3;
  const Matrix M = build_M(X, lt, opts);
  for (std::size_t i = 0; i < p; ++i) {
    const auto r = nodewise_regression(X, i, lt);
    Vector full = Vector::Zero(p);
    for (std::size_t c = 0, k = 0; c < p; ++c)
      if (c != i) full[static_cast<Eigen::Index>(c)] = r.gamma[static_cast<Eigen::Index>(k++)];
    const Vector xi = X.col(static_cast<Eigen::Index>(i));
    const double a2 = (xi - X * full).dot(xi) / static_cast<double>(n);
    const auto ii = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(M(ii, ii), 1.0 / a2, 1e-12 / a2);
    for (std::size_t c = 0; c < p; ++c)
      if (c != i) EXPECT_NEAR(M(ii, static_cast<Eigen::Index>(c)), -full[static_cast<Eigen::Index>(c)] / a2, 1e-12);
  }
  EXPECT_EQ(M, build_M(X, lt));
}

TEST(BuildM, DegenerateColumnIsReported) {
  Matrix X = Matrix::Zero(10, 3);
  X.col(0) = Vector::LinSpaced(10, 1.0, 2.0);
  X.col(2) = Vector::LinSpaced(10, -1.0, 1.0);
  try {
    build_M(X, 0.1);
    FAIL();
  } catch (const DegenerateColumnError& e) {
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(BuildM, KnownCovarianceInverts) {
  Matrix S(3, 3);
  S << 1.0, 0.4, 0.1, 0.4, 1.0, 0.3, 0.1, 0.3, 1.0;
  const Matrix M = build_M_known(CovarianceSpec::explicit_matrix(S), 3);
  EXPECT_LT((M * S - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(build_M_known(CovarianceSpec::identity(), 4), Matrix(Matrix::Identity(4, 4)));
}

TEST(Debias, OneStepArithmetic) {
  std::mt19937_64 rng(6);
  const Matrix X = oracle::gaussian_matrix(30, 10, rng);
  const Vector y = oracle::gaussian_vector(30, rng);
  const auto ds = make_dataset(X, y);
  const auto lasso = fit_lasso(X, y, 5.0);
  const Matrix M = build_M(X, 0.3);
  const auto fit = debias(ds, lasso, M, 0.3, 0.7);
  const Vector expect = lasso.coefficients + M * X.transpose() * (y - X * lasso.coefficients) / 30.0;
  EXPECT_LE((fit.theta_d - expect).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + expect.cwiseAbs().maxCoeff()));
  EXPECT_EQ(fit.lambda_tilde, 0.3);
  EXPECT_EQ(fit.sigma_hat, 0.7);
}

TEST(Debias, ZeroResidualOrZeroMKeepsLasso) {
  std::mt19937_64 rng(7);
  const Matrix X = oracle::gaussian_matrix(20, 5, rng);
  const Vector y = oracle::gaussian_vector(20, rng);
  const auto lasso = fit_lasso(X, y, 1.0);
  const auto a = debias(make_dataset(X, y), lasso, Matrix::Zero(5, 5));
  EXPECT_EQ(a.theta_d, lasso.coefficients);

  LassoFit exact = lasso;
  const Vector y_exact = X * lasso.coefficients;
  const auto b = debias(make_dataset(X, y_exact), exact, Matrix::Identity(5, 5));
  EXPECT_LT((b.theta_d - lasso.coefficients).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Debias, RecoversLeastSquaresWithExactInverse) {
  std::mt19937_64 rng(8);
  const Matrix X = oracle::gaussian_matrix(50, 6, rng);
  const Vector y = oracle::gaussian_vector(50, rng);
  const auto lasso = fit_lasso(X, y, 0.0);
  const Matrix M = (X.transpose() * X / 50.0).inverse();
  const auto fit = debias(make_dataset(X, y), lasso, M);
  EXPECT_LT((fit.theta_d - oracle::ols(X, y)).cwiseAbs().maxCoeff(), 1e-8);

  LassoFit biased = fit_lasso(X, y, 30.0);
  const auto fit2 = debias(make_dataset(X, y), biased, M);
  EXPECT_LT((fit2.theta_d - oracle::ols(X, y)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Debias, ShapeMismatch) {
  const Matrix X = Matrix::Ones(4, 3);
  const auto lasso = fit_lasso(X, Vector::Ones(4), 100.0);
  EXPECT_THROW(debias(make_dataset(X, Vector::Ones(4)), lasso, Matrix::Identity(2, 2)), ParameterError);
}

TEST(LambdaTilde, Formula) {
  EXPECT_NEAR(lambda_tilde_theory(3, 3, 1.0), std::sqrt(std::log(3.0) / 3.0), 1e-15);
  EXPECT_NEAR(lambda_tilde_theory(20, 100, 4.0), 2.0 * lambda_tilde_theory(20, 100, 2.0), 1e-15);
  EXPECT_NEAR(lambda_tilde_theory(20, 100), 2.0 * std::sqrt(std::log(100.0) / 20.0), 1e-15);
}

TEST(SigmaEstimate, ScaledResidualNorm) {
  Matrix X = Matrix::Identity(4, 2);
  Vector y(4);
  y << 1.0, 2.0, 3.0, 4.0;
  Vector theta(2);
  theta << 1.0, 0.0;
  // residual (0, 2, 3, 4), one nonzero coefficient
  EXPECT_NEAR(estimate_sigma(X, y, theta), std::sqrt(29.0 / 3.0), 1e-15);
}

TEST(Lemma2, DiagonalOfDebiasedCovariance) {
  std::mt19937_64 rng(9);
  const std::size_t n = 200, p = 40;
  double worst_c = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix X = oracle::gaussian_matrix(n, p, rng);
    const Matrix M = build_M(X, lambda_tilde_theory(n, p));
    const Matrix V = debiased_covariance(X, M);
    const double dev = (V.diagonal().array() - 1.0).abs().maxCoeff();
    worst_c = std::max(worst_c, dev / std::sqrt(std::log(double(p)) / double(n)));
  }
  EXPECT_LE(worst_c, 10.0);
}
