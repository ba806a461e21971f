#include "fedsel/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fedsel/error.hpp"

namespace fedsel {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double lasso_objective(const Matrix& X, const Vector& y, const Vector& theta, double lambda) {
  return (y - X * theta).squaredNorm() + lambda * theta.lpNorm<1>();
}

double lasso_kkt_residual(const Matrix& X, const Vector& y, const Vector& theta,
                          double lambda) {
  const Vector grad = 2.0 * X.transpose() * (y - X * theta);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double v = theta[j] != 0.0 ? std::abs(grad[j] - lambda * (theta[j] > 0 ? 1.0 : -1.0))
                                     : std::max(0.0, std::abs(grad[j]) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

// Core solver on a fixed design; `theta` holds the warm start on entry.
LassoFit coordinate_descent(const Matrix& X, const Vector& y, double lambda, Vector theta,
                            const LassoOptions& opts) {
  const Eigen::Index p = X.cols();
  const Vector col_sq = X.colwise().squaredNorm().transpose();
  const double scale = lambda + (X.transpose() * y).lpNorm<Eigen::Infinity>();
  const double kkt_tol = opts.tol * std::max(scale, std::numeric_limits<double>::min());
  const double half_lambda = 0.5 * lambda;

  Vector resid = y - X * theta;
  LassoFit fit;
  fit.lambda = lambda;

  // One pass over `coords`; returns the largest coefficient change.
  auto sweep = [&](const std::vector<Eigen::Index>& coords) {
    double max_change = 0.0;
    for (Eigen::Index j : coords) {
      if (col_sq[j] <= 0.0) {
        if (theta[j] != 0.0) {
          max_change = std::max(max_change, std::abs(theta[j]));
          theta[j] = 0.0;
        }
        continue;
      }
      const double old = theta[j];
      const double rho = X.col(j).dot(resid) + col_sq[j] * old;
      const double updated = soft_threshold(rho, half_lambda) / col_sq[j];
      const double diff = updated - old;
      if (diff != 0.0) {
        resid.noalias() -= diff * X.col(j);
        theta[j] = updated;
        max_change = std::max(max_change, std::abs(diff));
      }
    }
    return max_change;
  };

  std::vector<Eigen::Index> all(static_cast<std::size_t>(p));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  std::vector<Eigen::Index> active;

  auto note_sweep = [&] {
    ++fit.iterations;
    if (opts.record_trace)
      fit.objective_trace.push_back(resid.squaredNorm() + lambda * theta.lpNorm<1>());
  };

  while (fit.iterations < opts.max_iter) {
    const double change = sweep(all);
    note_sweep();
    if (change < opts.tol) {
      resid = y - X * theta;
      fit.kkt_residual = lasso_kkt_residual(X, y, theta, lambda);
      if (fit.kkt_residual <= kkt_tol) {
        fit.converged = true;
        break;
      }
    }
    // Iterate on the current support until it settles, then re-check all.
    active.clear();
    for (Eigen::Index j = 0; j < p; ++j)
      if (theta[j] != 0.0) active.push_back(j);
    if (active.empty() || active.size() == all.size()) continue;
    while (fit.iterations < opts.max_iter) {
      const double c = sweep(active);
      note_sweep();
      if (c < opts.tol) break;
    }
  }

  if (!fit.converged) fit.kkt_residual = lasso_kkt_residual(X, y, theta, lambda);
  fit.coefficients = std::move(theta);
  return fit;
}

}  // namespace

LassoFit fit_lasso(const Matrix& X, const Vector& y, double lambda, const LassoOptions& opts) {
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  if (X.rows() == 0 || X.cols() == 0) throw ParameterError("empty design");
  if (X.rows() != y.size()) throw ParameterError("design and response lengths differ");
  if (opts.warm_start && opts.warm_start->size() != X.cols())
    throw ParameterError("warm start has wrong length");

  Vector start = opts.warm_start ? *opts.warm_start : Vector::Zero(X.cols());
  if (!opts.standardize) {
    LassoFit fit = coordinate_descent(X, y, lambda, std::move(start), opts);
    fit.objective = lasso_objective(X, y, fit.coefficients, lambda);
    return fit;
  }

  const double n = static_cast<double>(X.rows());
  Vector scale = (X.colwise().squaredNorm().transpose() / n).cwiseSqrt();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale[j] <= 0.0) scale[j] = 1.0;
  const Matrix Xs = X * scale.cwiseInverse().asDiagonal();
  LassoFit fit = coordinate_descent(Xs, y, lambda, start.cwiseProduct(scale), opts);
  fit.coefficients = fit.coefficients.cwiseQuotient(scale);
  fit.objective = lasso_objective(X, y, fit.coefficients, lambda);
  return fit;
}

LassoFit fit_lasso(const Dataset& ds, double lambda, const LassoOptions& opts) {
  validate_dataset(ds);
  return fit_lasso(ds.X, ds.y, lambda, opts);
}

double lambda_theory(double sigma_hat, std::size_t n, std::size_t p, double k) {
  if (n < 2 || p < 2) throw ParameterError("lambda_theory needs n, p >= 2");
  if (!(sigma_hat >= 0.0)) throw ParameterError("sigma must be non-negative");
  if (!(k >= 8.0)) throw ParameterError("k must be at least 8");
  return k * sigma_hat * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double lambda_max(const Matrix& X, const Vector& y) {
  return 2.0 * (X.transpose() * y).lpNorm<Eigen::Infinity>();
}

std::vector<double> default_lambda_grid(const Matrix& X, const Vector& y, std::size_t count,
                                        double ratio) {
  if (count == 0) throw ParameterError("grid must be non-empty");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ParameterError("grid ratio must lie in (0, 1]");
  const double top = lambda_max(X, y);
  std::vector<double> grid(count);
  if (count == 1 || top == 0.0) {
    std::fill(grid.begin(), grid.end(), top);
    return grid;
  }
  const double step = std::log(ratio) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = top * std::exp(step * static_cast<double>(k));
  return grid;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k_folds,
                                                 std::uint64_t seed) {
  if (k_folds < 2) throw ParameterError("need at least two folds");
  if (n < k_folds)
    throw ParameterError("fold would be empty: " + std::to_string(n) + " rows for " +
                         std::to_string(k_folds) + " folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k_folds);
  const std::size_t base = n / k_folds, extra = n % k_folds;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < k_folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                    perm.begin() + static_cast<std::ptrdiff_t>(offset + size));
    std::sort(folds[f].begin(), folds[f].end());
    offset += size;
  }
  return folds;
}

CrossValidationResult cross_validate(const Matrix& X, const Vector& y, std::size_t k_folds,
                                     std::span<const double> lambda_grid, std::uint64_t seed,
                                     const LassoOptions& opts) {
  if (lambda_grid.empty()) throw ParameterError("lambda grid is empty");
  for (double l : lambda_grid)
    if (!(l >= 0.0)) throw ParameterError("lambda grid values must be non-negative");
  const auto n = static_cast<std::size_t>(X.rows());
  const auto folds = make_folds(n, k_folds, seed);

  // Fit in descending lambda order so each fit warm-starts from the previous one.
  std::vector<std::size_t> order(lambda_grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambda_grid[a] > lambda_grid[b]; });

  CrossValidationResult result;
  result.grid.assign(lambda_grid.begin(), lambda_grid.end());
  result.mean_error.assign(lambda_grid.size(), 0.0);

  std::vector<char> held(n);
  for (const auto& fold : folds) {
    std::fill(held.begin(), held.end(), 0);
    for (std::size_t r : fold) held[r] = 1;
    const auto n_test = static_cast<Eigen::Index>(fold.size());
    const auto n_train = static_cast<Eigen::Index>(n) - n_test;
    Matrix Xtr(n_train, X.cols()), Xte(n_test, X.cols());
    Vector ytr(n_train), yte(n_test);
    for (Eigen::Index r = 0, a = 0, b = 0; r < X.rows(); ++r) {
      if (held[static_cast<std::size_t>(r)]) {
        Xte.row(b) = X.row(r);
        yte[b++] = y[r];
      } else {
        Xtr.row(a) = X.row(r);
        ytr[a++] = y[r];
      }
    }
    LassoOptions local = opts;
    local.record_trace = false;
    local.warm_start.reset();
    for (std::size_t idx : order) {
      LassoFit fit = fit_lasso(Xtr, ytr, lambda_grid[idx], local);
      result.mean_error[idx] += (yte - Xte * fit.coefficients).squaredNorm() /
                                static_cast<double>(n_test);
      local.warm_start = std::move(fit.coefficients);
    }
  }
  for (double& e : result.mean_error) e /= static_cast<double>(k_folds);

  // Scan from the largest lambda; only a strictly smaller error displaces it.
  std::size_t best = order.front();
  for (std::size_t idx : order)
    if (result.mean_error[idx] < result.mean_error[best]) best = idx;
  result.lambda = lambda_grid[best];
  return result;
}

double cross_validate_lambda(const Dataset& ds, std::size_t k_folds,
                             std::span<const double> lambda_grid, std::uint64_t seed) {
  validate_dataset(ds);
  return cross_validate(ds.X, ds.y, k_folds, lambda_grid, seed).lambda;
}

}  // namespace fedsel
