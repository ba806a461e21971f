#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fedsel/datagen.hpp"
#include "fedsel/types.hpp"

namespace fedsel {

// Solution of  min_theta ||y - X theta||_2^2 + lambda ||theta||_1.
// Note the objective carries no 1/(2n) factor; use `unnormalized_lambda`
// to convert a penalty stated for the (1/2n)-scaled objective.
struct LassoFit {
  Vector coefficients;
  double lambda = 0.0;
  std::size_t iterations = 0;  // coordinate-descent sweeps
  bool converged = false;
  double objective = 0.0;
  double kkt_residual = 0.0;  // max subgradient violation at `coefficients`
  std::vector<double> objective_trace;  // one entry per sweep when recorded
};

struct LassoOptions {
  std::size_t max_iter = 10000;
  double tol = 1e-8;
  std::optional<Vector> warm_start;
  // Fit on unit-variance columns and map coefficients back to the original scale.
  bool standardize = false;
  bool record_trace = false;
};

double soft_threshold(double z, double t);

double lasso_objective(const Matrix& X, const Vector& y, const Vector& theta, double lambda);

// Largest violation of the subgradient optimality conditions.
double lasso_kkt_residual(const Matrix& X, const Vector& y, const Vector& theta,
                          double lambda);

// Cyclic coordinate descent. A fit is marked converged once the largest
// coefficient change in a sweep drops below `tol` and the KKT residual is at
// most tol * (lambda + ||X^T y||_inf). Exhausting max_iter is not an error.
LassoFit fit_lasso(const Matrix& X, const Vector& y, double lambda,
                   const LassoOptions& opts = {});
LassoFit fit_lasso(const Dataset& ds, double lambda, const LassoOptions& opts = {});

// k * sigma * sqrt(log p / n), the penalty for the (1/2n)-scaled objective.
double lambda_theory(double sigma_hat, std::size_t n, std::size_t p, double k = 8.0);

// 2 n lambda: rescales a (1/2n)-objective penalty to this module's objective.
inline double unnormalized_lambda(double lambda, std::size_t n) {
  return 2.0 * static_cast<double>(n) * lambda;
}

// 2 ||X^T y||_inf, the smallest penalty with an all-zero solution.
double lambda_max(const Matrix& X, const Vector& y);

// `count` log-spaced values from lambda_max down to ratio * lambda_max.
std::vector<double> default_lambda_grid(const Matrix& X, const Vector& y,
                                        std::size_t count = 50, double ratio = 1e-4);

struct CrossValidationResult {
  double lambda = 0.0;
  std::vector<double> grid;        // as supplied
  std::vector<double> mean_error;  // mean held-out squared error per grid point
};

// Fold assignment: a seeded permutation split into k contiguous folds.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k_folds,
                                                 std::uint64_t seed);

// k-fold CV over `lambda_grid`; the minimiser of mean held-out error wins,
// ties go to the larger lambda.
CrossValidationResult cross_validate(const Matrix& X, const Vector& y, std::size_t k_folds,
                                     std::span<const double> lambda_grid, std::uint64_t seed,
                                     const LassoOptions& opts = {});

double cross_validate_lambda(const Dataset& ds, std::size_t k_folds,
                             std::span<const double> lambda_grid, std::uint64_t seed);

}  // namespace fedsel
