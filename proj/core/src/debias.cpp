#include "fedsel/debias.hpp"

#include <cmath>
#include <vector>

#include "fedsel/error.hpp"
#include "parallel.hpp"

namespace fedsel {

namespace {

Matrix drop_column(const Matrix& X, Eigen::Index column) {
  Matrix out(X.rows(), X.cols() - 1);
  if (column > 0) out.leftCols(column) = X.leftCols(column);
  if (column + 1 < X.cols())
    out.rightCols(X.cols() - column - 1) = X.rightCols(X.cols() - column - 1);
  return out;
}

}  // namespace

NodewiseResult nodewise_regression(const Matrix& X, std::size_t column, double lambda_tilde,
                                   const LassoOptions& opts) {
  if (X.cols() < 2) throw ParameterError("node-wise regression needs p >= 2");
  if (column >= static_cast<std::size_t>(X.cols())) throw ParameterError("column out of range");
  if (!(lambda_tilde >= 0.0)) throw ParameterError("lambda_tilde must be non-negative");
  const auto i = static_cast<Eigen::Index>(column);
  const Matrix others = drop_column(X, i);
  const Vector target = X.col(i);
  // (1/2n)||x - Z g||^2 + lt ||g||_1  has the minimiser of  ||x - Z g||^2 + 2 n lt ||g||_1.
  LassoFit fit = fit_lasso(others, target,
                           unnormalized_lambda(lambda_tilde, static_cast<std::size_t>(X.rows())),
                           opts);
  return {std::move(fit.coefficients), fit.converged};
}

Matrix build_M(const Matrix& X, double lambda_tilde, const BuildMOptions& opts) {
  const Eigen::Index p = X.cols();
  const double n = static_cast<double>(X.rows());
  if (p == 0 || X.rows() == 0) throw ParameterError("empty design");

  if (p == 1) {
    const double a2 = X.col(0).squaredNorm() / n;
    if (a2 <= opts.degeneracy_tol) throw DegenerateColumnError(0, a2);
    return Matrix::Constant(1, 1, 1.0 / a2);
  }

  Matrix M = Matrix::Zero(p, p);
  std::vector<double> a2(static_cast<std::size_t>(p), 0.0);
  detail::parallel_for(static_cast<std::size_t>(p), opts.jobs, [&](std::size_t col) {
    const auto i = static_cast<Eigen::Index>(col);
    const NodewiseResult node = nodewise_regression(X, col, lambda_tilde, opts.lasso);
    const Matrix others = drop_column(X, i);
    const Vector resid = X.col(i) - others * node.gamma;
    a2[col] = resid.dot(X.col(i)) / n;
    // Row i of C: 1 on the diagonal, -gamma elsewhere.
    M(i, i) = 1.0;
    for (Eigen::Index k = 0, j = 0; j < p; ++j) {
      if (j == i) continue;
      M(i, j) = -node.gamma[k++];
    }
  });
  for (Eigen::Index i = 0; i < p; ++i) {
    const double v = a2[static_cast<std::size_t>(i)];
    if (!(v > opts.degeneracy_tol)) throw DegenerateColumnError(static_cast<std::size_t>(i), v);
    M.row(i) /= v;
  }
  return M;
}

Matrix build_M_known(const CovarianceSpec& covariance, std::size_t p) {
  const auto dim = static_cast<Eigen::Index>(p);
  if (covariance.is_identity()) return Matrix::Identity(dim, dim);
  if (covariance.matrix().rows() != dim) throw ParameterError("covariance dimension mismatch");
  return covariance.matrix().llt().solve(Matrix::Identity(dim, dim));
}

DebiasedFit debias(const Dataset& ds, const LassoFit& lasso, const Matrix& M,
                   double lambda_tilde, double sigma_hat) {
  const Eigen::Index p = ds.X.cols();
  if (ds.X.rows() != ds.y.size() || lasso.coefficients.size() != p || M.rows() != p ||
      M.cols() != p)
    throw ParameterError("debias: dimension mismatch");
  const double n = static_cast<double>(ds.X.rows());

  DebiasedFit out;
  const Vector resid = ds.y - ds.X * lasso.coefficients;
  out.theta_d = lasso.coefficients + (M * (ds.X.transpose() * resid)) / n;
  out.M = M;
  out.lasso = lasso;
  out.lambda_tilde = lambda_tilde;
  out.sigma_hat = sigma_hat;
  return out;
}

double lambda_tilde_theory(std::size_t n, std::size_t p, double K) {
  if (n < 2 || p < 2) throw ParameterError("lambda_tilde_theory needs n, p >= 2");
  if (!(K > 0.0)) throw ParameterError("K must be positive");
  return K * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double estimate_sigma(const Matrix& X, const Vector& y, const Vector& theta) {
  const auto support = static_cast<double>((theta.array() != 0.0).count());
  const double dof = std::max(1.0, static_cast<double>(X.rows()) - support);
  return (y - X * theta).norm() / std::sqrt(dof);
}

Matrix debiased_covariance(const Matrix& X, const Matrix& M) {
  const Matrix sigma_hat = X.transpose() * X / static_cast<double>(X.rows());
  return M * sigma_hat * M.transpose();
}

}  // namespace fedsel
