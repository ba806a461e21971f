#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedsel/datagen.hpp"
#include "fedsel/debias.hpp"
#include "fedsel/fedavg.hpp"
#include "fedsel/ledger.hpp"
#include "fedsel/select.hpp"

namespace fedsel {

struct ConsensusResult {
  IndexSet selected;
  std::vector<std::size_t> votes;  // length p, each in [0, N]
  std::size_t quorum = 0;
};

// ceil(N / 2)
constexpr std::size_t majority_quorum(std::size_t clients) { return (clients + 1) / 2; }

// votes[j] = #{i : j in F_i}; selected = {j : votes[j] >= quorum}.
// Throws ProtocolError on duplicate client ids, wrong set count or an index >= p.
ConsensusResult majority_vote(std::span<const FeatureSet> sets, std::size_t clients,
                              std::size_t p);
ConsensusResult majority_vote(std::span<const FeatureSet> sets, std::size_t clients,
                              std::size_t p, std::size_t quorum);

enum class LambdaMode { Theory, CrossValidation };
enum class SelectionMode { Threshold, TopK, Interval };
enum class MMode { Nodewise, KnownCovariance };

struct ProtocolConfig {
  LambdaMode lambda_mode = LambdaMode::CrossValidation;
  double lambda_k = 8.0;         // Theory: lambda = k sigma sqrt(log p / n_i)
  std::size_t cv_folds = 5;
  std::size_t cv_grid_size = 50;
  double cv_grid_ratio = 1e-4;

  MMode m_mode = MMode::Nodewise;
  double K = 2.0;                // lambda_tilde = K sqrt(log p / n_i)

  SelectionMode selection = SelectionMode::TopK;
  double tau = 0.0;              // Threshold
  std::size_t top_k = 25;        // TopK
  double epsilon = 0.05;         // Interval
  double delta = 0.05;
  double c_r = 1.0;

  // Noise level used by lambda formulas and the analytic interval. When
  // absent each client estimates it from its LASSO residual.
  std::optional<double> sigma;
  // Needed by Interval mode and MMode::KnownCovariance.
  std::optional<std::size_t> s0;
  std::optional<double> beta;
  CovarianceSpec covariance = CovarianceSpec::identity();

  unsigned f_bits = 32;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;  // per-client streams are derived from (seed, client_id)

  bool run_fedavg = false;
  FedAvgOptions fedavg;
};

struct ClientDiagnostics {
  std::size_t client_id = 0;
  std::size_t rows = 0;
  double lambda = 0.0;        // penalty actually used, unnormalised objective
  double lambda_tilde = 0.0;
  double sigma_hat = 0.0;
  bool lasso_converged = false;
  double threshold = 0.0;
  std::optional<ThresholdInterval> interval;
  Vector theta_d;
  Vector theta_lasso;
};

// Seed of the RNG stream owned by one client.
std::uint64_t client_seed(std::uint64_t master, std::size_t client_id);

// Stage one on a single shard: LASSO, debias, select.
FeatureSet run_client(const Dataset& shard, std::size_t client_id, const ProtocolConfig& config,
                      ClientDiagnostics* diagnostics = nullptr);

struct StageOneResult {
  std::vector<FeatureSet> sets;
  CommLedger ledger;
  std::vector<ClientDiagnostics> diagnostics;
};

// Runs every client (concurrently when config.jobs > 1) and delivers the
// feature sets to the server as FeatureUpload messages. Any client failure
// aborts the run with ClientFailureError listing all failed clients.
StageOneResult run_stage_one(const Partition& part, const ProtocolConfig& config);

struct ProtocolResult {
  ConsensusResult consensus;
  CommLedger ledger;
  std::vector<FeatureSet> client_sets;
  std::vector<ClientDiagnostics> diagnostics;
  std::optional<FedAvgResult> fedavg;
};

// Stage one, majority vote, SelectionBroadcast of the selected set to every
// client, then optionally FederatedAveraging restricted to that set.
ProtocolResult run_protocol(const Partition& part, const ProtocolConfig& config);

// 2N (ceil(log2 p) s0 + rounds * selected_size * f_bits)
std::uint64_t comm_cost_model(std::size_t p, std::size_t s0, std::size_t clients,
                              std::size_t rounds, unsigned f_bits, std::size_t selected_size);

// 2N p rounds f_bits
std::uint64_t fedavg_baseline_cost(std::size_t p, std::size_t clients, std::size_t rounds,
                                   unsigned f_bits);

}  // namespace fedsel
