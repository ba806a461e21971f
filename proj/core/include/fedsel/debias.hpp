#pragma once

#include <cstddef>

#include "fedsel/datagen.hpp"
#include "fedsel/lasso.hpp"
#include "fedsel/types.hpp"

namespace fedsel {

/// One-step corrected LASSO estimate
///   theta_d = theta_lasso + (1/n) M X^T (y - X theta_lasso)
/// together with the inputs that produced it.
struct DebiasedFit {
  Vector theta_d;
  Matrix M;
  LassoFit lasso;
  double lambda_tilde = 0.0;  // node-wise penalty; 0 when M came from a known covariance
  double sigma_hat = 0.0;
};

struct NodewiseResult {
  Vector gamma;  // length p - 1, coefficients on the columns other than i
  bool converged = false;
};

/// Regresses column `column` on all other columns with the objective
///   (1/2n) ||x_i - X_{~i} gamma||^2 + lambda_tilde ||gamma||_1.
NodewiseResult nodewise_regression(const Matrix& X, std::size_t column, double lambda_tilde,
                                   const LassoOptions& opts = {});

struct BuildMOptions {
  LassoOptions lasso;
  double degeneracy_tol = 1e-12;
  std::size_t jobs = 1;  // node-wise regressions run on up to `jobs` threads
};

/// Approximate inverse covariance M = Phi^{-2} C from node-wise regressions:
/// C has unit diagonal and -gamma_{i,j} off the diagonal, and
/// Phi^2 = diag(a_i^2) with a_i^2 = (1/n)(x_i - X_{~i} gamma_i)^T x_i.
///
/// Throws DegenerateColumnError when some a_i^2 <= degeneracy_tol.
Matrix build_M(const Matrix& X, double lambda_tilde, const BuildMOptions& opts = {});

/// Known-covariance shortcut: M = Sigma^{-1}.
Matrix build_M_known(const CovarianceSpec& covariance, std::size_t p);

/// Applies the one-step correction. Throws ParameterError on shape mismatch.
DebiasedFit debias(const Dataset& ds, const LassoFit& lasso, const Matrix& M,
                   double lambda_tilde = 0.0, double sigma_hat = 0.0);

/// K sqrt(log p / n).
double lambda_tilde_theory(std::size_t n, std::size_t p, double K = 2.0);

/// ||y - X theta||_2 / sqrt(n - s_hat), s_hat the number of nonzero
/// coefficients; the denominator is floored at 1.
double estimate_sigma(const Matrix& X, const Vector& y, const Vector& theta);

/// M Sigma_hat M^T with Sigma_hat = X^T X / n.
Matrix debiased_covariance(const Matrix& X, const Matrix& M);

}  // namespace fedsel
