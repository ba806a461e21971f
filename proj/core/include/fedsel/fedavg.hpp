#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fedsel/datagen.hpp"
#include "fedsel/ledger.hpp"
#include "fedsel/types.hpp"

namespace fedsel {

struct RoundRecord {
  std::size_t round = 0;
  double mse = 0.0;        // ||theta_full - theta_star||^2 / p, NaN without a reference
  double max_delta = 0.0;  // ||theta^{s+1} - theta^s||_inf
  double loss = 0.0;       // sum_i ||y_i - X_i theta||^2
};

struct FedAvgState {
  Vector theta;
  std::size_t round = 0;
  double mu = 0.0;
  std::vector<RoundRecord> history;
};

struct FedAvgOptions {
  std::optional<double> mu;  // default 1 / (2 max_i lambda_max(X_i^T X_i))
  std::size_t local_steps = 1;
  std::size_t max_rounds = 10000;
  double tol = 1e-8;
  unsigned f_bits = 32;
  std::size_t jobs = 1;
  // Reference for the per-round MSE column, full length p.
  std::optional<Vector> theta_star;
};

struct FedAvgResult {
  FedAvgState state;
  bool converged = false;
  CommLedger ledger;  // FedAvgModelDown / FedAvgModelUp traffic of this run
  IndexSet columns;   // columns the model lives on

  // Model scattered back to all p columns.
  Vector full_theta(std::size_t p) const;
};

// `local_steps` full-gradient steps on ||y - X theta||^2. Throws StepSizeError
// when the local loss grows more than tenfold from its starting value.
Vector client_update(const Matrix& X, const Vector& y, const Vector& theta, double mu,
                     std::size_t local_steps = 1);

// Largest eigenvalue of X^T X by power iteration.
double spectral_bound(const Matrix& X, std::size_t iterations = 200);

// 1 / (2 max_i lambda_max(X_i^T X_i)) over the (column-restricted) shards.
double default_step_size(const Partition& part, const IndexSet& columns);

// FederatedAveraging over `columns` (empty = all columns), starting at zero.
// Each round: broadcast theta, one ClientUpdate per client, average with
// weights n_i / n. Stops when ||theta^{s+1} - theta^s||_inf < tol.
FedAvgResult run_fedavg(const Partition& part, const IndexSet& columns,
                        const FedAvgOptions& opts = {});

}  // namespace fedsel
