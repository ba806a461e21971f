#include "fedsel/fedavg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fedsel/error.hpp"
#include "parallel.hpp"

namespace fedsel {

Vector FedAvgResult::full_theta(std::size_t p) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < columns.size(); ++k)
    out[static_cast<Eigen::Index>(columns[k])] = state.theta[static_cast<Eigen::Index>(k)];
  return out;
}

Vector client_update(const Matrix& X, const Vector& y, const Vector& theta, double mu,
                     std::size_t local_steps) {
  if (!(mu > 0.0)) throw ParameterError("step size must be positive");
  if (local_steps == 0) throw ParameterError("need at least one local step");
  if (X.cols() != theta.size() || X.rows() != y.size())
    throw ParameterError("client_update: dimension mismatch");

  Vector out = theta;
  const double start_loss = (y - X * theta).squaredNorm();
  for (std::size_t s = 0; s < local_steps; ++s) {
    const Vector resid = y - X * out;
    out.noalias() += (2.0 * mu) * (X.transpose() * resid);
    const double loss = (y - X * out).squaredNorm();
    if (!std::isfinite(loss) || (loss > 10.0 * start_loss && loss > 0.0))
      throw StepSizeError("local loss grew from " + std::to_string(start_loss) + " to " +
                          std::to_string(loss) + "; reduce mu");
  }
  return out;
}

double spectral_bound(const Matrix& X, std::size_t iterations) {
  if (X.cols() == 0) return 0.0;
  Vector v = Vector::Ones(X.cols()).normalized();
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    Vector w = X.transpose() * (X * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    estimate = v.dot(w);
    v = w / norm;
  }
  return std::max(estimate, (X * v).squaredNorm());
}

namespace {

std::vector<Matrix> restrict_shards(const Partition& part, const IndexSet& columns) {
  std::vector<Matrix> out;
  out.reserve(part.clients());
  for (const auto& shard : part.shards) {
    Matrix Xr(shard.X.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k)
      Xr.col(static_cast<Eigen::Index>(k)) = shard.X.col(static_cast<Eigen::Index>(columns[k]));
    out.push_back(std::move(Xr));
  }
  return out;
}

IndexSet resolve_columns(const Partition& part, const IndexSet& columns) {
  if (part.clients() == 0) throw ParameterError("partition has no clients");
  const std::size_t p = part.shards.front().cols();
  if (columns.empty()) {
    IndexSet all(p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= p) throw ParameterError("column subset index out of range");
    if (k > 0 && columns[k - 1] >= columns[k])
      throw ParameterError("column subset must be sorted and unique");
  }
  return columns;
}

double step_for(const std::vector<Matrix>& shards) {
  double L = 0.0;
  for (const auto& X : shards) L = std::max(L, spectral_bound(X));
  if (L <= 0.0) throw ParameterError("all shards are zero; no step size");
  return 1.0 / (2.0 * L);
}

}  // namespace

double default_step_size(const Partition& part, const IndexSet& columns) {
  return step_for(restrict_shards(part, resolve_columns(part, columns)));
}

FedAvgResult run_fedavg(const Partition& part, const IndexSet& columns,
                        const FedAvgOptions& opts) {
  FedAvgResult out;
  out.columns = resolve_columns(part, columns);
  const std::size_t p = part.shards.front().cols();
  const std::size_t N = part.clients();
  if (opts.theta_star && static_cast<std::size_t>(opts.theta_star->size()) != p)
    throw ParameterError("theta_star must have length p");

  const std::vector<Matrix> shards = restrict_shards(part, out.columns);
  const double mu = opts.mu ? *opts.mu : step_for(shards);
  if (!(mu > 0.0)) throw ParameterError("step size must be positive");

  const double n = static_cast<double>(part.total_rows());
  std::vector<double> weights(N);
  for (std::size_t i = 0; i < N; ++i) weights[i] = static_cast<double>(part.client_sizes[i]) / n;

  const auto dim = static_cast<Eigen::Index>(out.columns.size());
  out.state.theta = Vector::Zero(dim);
  out.state.mu = mu;
  std::vector<Vector> updates(N);

  while (out.state.round < opts.max_rounds) {
    for (std::size_t i = 0; i < N; ++i)
      out.ledger.record(make_message(i, Direction::ServerToClient, Phase::FedAvgModelDown,
                                     out.state.theta, p, opts.f_bits));
    detail::parallel_for(N, opts.jobs, [&](std::size_t i) {
      updates[i] = client_update(shards[i], part.shards[i].y, out.state.theta, mu, opts.local_steps);
    });
    Vector next = Vector::Zero(dim);
    for (std::size_t i = 0; i < N; ++i) {
      out.ledger.record(make_message(i, Direction::ClientToServer, Phase::FedAvgModelUp,
                                     updates[i], p, opts.f_bits));
      next += weights[i] * updates[i];
    }

    RoundRecord rec;
    rec.round = ++out.state.round;
    rec.max_delta = dim ? (next - out.state.theta).lpNorm<Eigen::Infinity>() : 0.0;
    out.state.theta = std::move(next);
    for (std::size_t i = 0; i < N; ++i)
      rec.loss += (part.shards[i].y - shards[i] * out.state.theta).squaredNorm();
    rec.mse = opts.theta_star
                  ? (out.full_theta(p) - *opts.theta_star).squaredNorm() / static_cast<double>(p)
                  : std::numeric_limits<double>::quiet_NaN();
    out.state.history.push_back(rec);
    if (rec.max_delta < opts.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace fedsel
