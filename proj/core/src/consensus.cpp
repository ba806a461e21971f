#include "fedsel/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "fedsel/error.hpp"
#include "fedsel/lasso.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fedsel {

namespace {

std::string describe(const std::vector<ClientFailure>& failures) {
  std::ostringstream os;
  os << failures.size() << " client(s) failed:";
  for (const auto& f : failures) os << " [client " << f.client_id << ": " << f.message << "]";
  return os.str();
}

}  // namespace

ClientFailureError::ClientFailureError(std::vector<ClientFailure> failures)
    : Error(describe(failures)), failures_(std::move(failures)) {}

ConsensusResult majority_vote(std::span<const FeatureSet> sets, std::size_t clients,
                              std::size_t p) {
  return majority_vote(sets, clients, p, majority_quorum(clients));
}

ConsensusResult majority_vote(std::span<const FeatureSet> sets, std::size_t clients,
                              std::size_t p, std::size_t quorum) {
  if (clients == 0) throw ProtocolError("majority vote needs at least one client");
  if (sets.size() != clients)
    throw ProtocolError("expected " + std::to_string(clients) + " feature sets, received " +
                        std::to_string(sets.size()));
  std::set<std::size_t> seen;
  ConsensusResult out;
  out.quorum = quorum;
  out.votes.assign(p, 0);
  for (const auto& fs : sets) {
    if (!seen.insert(fs.client_id).second)
      throw ProtocolError("duplicate feature set from client " + std::to_string(fs.client_id));
    for (std::size_t k = 0; k < fs.indices.size(); ++k) {
      const std::size_t j = fs.indices[k];
      if (j >= p) throw ProtocolError("index " + std::to_string(j) + " out of range");
      if (k > 0 && fs.indices[k - 1] >= j)
        throw ProtocolError("feature set of client " + std::to_string(fs.client_id) +
                            " is not sorted and unique");
      ++out.votes[j];
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    if (out.votes[j] >= quorum) out.selected.push_back(j);
  return out;
}

std::uint64_t client_seed(std::uint64_t master, std::size_t client_id) {
  return detail::derive_seed(master, client_id, 0xc11e47);
}

FeatureSet run_client(const Dataset& shard, std::size_t client_id, const ProtocolConfig& config,
                      ClientDiagnostics* diagnostics) {
  validate_dataset(shard);
  const std::size_t n = shard.rows();
  const std::size_t p = shard.cols();
  const std::uint64_t seed = client_seed(config.seed, client_id);

  auto cv_lambda = [&] {
    const auto grid =
        default_lambda_grid(shard.X, shard.y, config.cv_grid_size, config.cv_grid_ratio);
    return cross_validate(shard.X, shard.y, config.cv_folds, grid, seed).lambda;
  };

  double lambda = 0.0;
  std::optional<LassoFit> pilot;
  if (config.lambda_mode == LambdaMode::CrossValidation) {
    lambda = cv_lambda();
  } else {
    double sigma_for_lambda = 0.0;
    if (config.sigma) {
      sigma_for_lambda = *config.sigma;
    } else {
      pilot = fit_lasso(shard.X, shard.y, cv_lambda());
      sigma_for_lambda = estimate_sigma(shard.X, shard.y, pilot->coefficients);
    }
    lambda = unnormalized_lambda(lambda_theory(sigma_for_lambda, n, p, config.lambda_k), n);
  }

  const LassoFit lasso = fit_lasso(shard.X, shard.y, lambda);
  const double sigma_hat =
      config.sigma ? *config.sigma : estimate_sigma(shard.X, shard.y, lasso.coefficients);

  double lambda_tilde = 0.0;
  Matrix M;
  if (config.m_mode == MMode::KnownCovariance) {
    M = build_M_known(config.covariance, p);
  } else {
    lambda_tilde = lambda_tilde_theory(n, p, config.K);
    M = build_M(shard.X, lambda_tilde);
  }
  const DebiasedFit fit = debias(shard, lasso, M, lambda_tilde, sigma_hat);

  std::optional<ThresholdInterval> interval;
  FeatureSet fs;
  switch (config.selection) {
    case SelectionMode::Threshold:
      fs = threshold_features(fit, config.tau, client_id);
      break;
    case SelectionMode::TopK:
      fs = top_k_features(fit, std::min(config.top_k, p), client_id);
      break;
    case SelectionMode::Interval: {
      if (!config.s0 || !config.beta)
        throw ParameterError("interval selection needs s0 and beta");
      interval = threshold_interval(*config.beta, sigma_hat, *config.s0, p,
                                    static_cast<double>(n), config.epsilon, config.delta,
                                    config.c_r);
      // Midpoint of a non-empty interval; the FPR-side endpoint otherwise.
      double tau = interval->nonempty ? 0.5 * (interval->lower + interval->upper)
                                      : interval->lower;
      if (!(tau > 0.0)) tau = std::numeric_limits<double>::min();
      fs = threshold_features(fit, tau, client_id);
      break;
    }
  }

  if (diagnostics) {
    diagnostics->client_id = client_id;
    diagnostics->rows = n;
    diagnostics->lambda = lambda;
    diagnostics->lambda_tilde = lambda_tilde;
    diagnostics->sigma_hat = sigma_hat;
    diagnostics->lasso_converged = lasso.converged;
    diagnostics->threshold = fs.threshold;
    diagnostics->interval = interval;
    diagnostics->theta_d = fit.theta_d;
    diagnostics->theta_lasso = lasso.coefficients;
  }
  return fs;
}

StageOneResult run_stage_one(const Partition& part, const ProtocolConfig& config) {
  const std::size_t N = part.clients();
  if (N == 0) throw ParameterError("partition has no clients");
  const std::size_t p = part.shards.front().cols();

  StageOneResult out;
  out.sets.resize(N);
  out.diagnostics.resize(N);
  std::vector<std::optional<std::string>> errors(N);
  detail::parallel_for(N, config.jobs, [&](std::size_t i) {
    try {
      out.sets[i] = run_client(part.shards[i], i, config, &out.diagnostics[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<ClientFailure> failures;
  for (std::size_t i = 0; i < N; ++i)
    if (errors[i]) failures.push_back({i, *errors[i]});
  if (!failures.empty()) throw ClientFailureError(std::move(failures));

  for (std::size_t i = 0; i < N; ++i) {
    out.ledger.record(make_message(i, Direction::ClientToServer, Phase::FeatureUpload,
                                   out.sets[i].indices, p, config.f_bits));
  }
  return out;
}

ProtocolResult run_protocol(const Partition& part, const ProtocolConfig& config) {
  StageOneResult stage = run_stage_one(part, config);
  const std::size_t N = part.clients();
  const std::size_t p = part.shards.front().cols();

  ProtocolResult out;
  out.consensus = majority_vote(stage.sets, N, p);
  out.ledger = std::move(stage.ledger);
  out.client_sets = std::move(stage.sets);
  out.diagnostics = std::move(stage.diagnostics);

  for (std::size_t i = 0; i < N; ++i) {
    out.ledger.record(make_message(i, Direction::ServerToClient, Phase::SelectionBroadcast,
                                   out.consensus.selected, p, config.f_bits));
  }

  if (config.run_fedavg && !out.consensus.selected.empty()) {
    FedAvgOptions opts = config.fedavg;
    opts.f_bits = config.f_bits;
    opts.jobs = config.jobs;
    out.fedavg = run_fedavg(part, out.consensus.selected, opts);
    out.ledger.merge(out.fedavg->ledger);
  }
  return out;
}

std::uint64_t comm_cost_model(std::size_t p, std::size_t s0, std::size_t clients,
                              std::size_t rounds, unsigned f_bits, std::size_t selected_size) {
  return 2ULL * clients *
         (index_bits(p) * s0 + static_cast<std::uint64_t>(rounds) * selected_size * f_bits);
}

std::uint64_t fedavg_baseline_cost(std::size_t p, std::size_t clients, std::size_t rounds,
                                   unsigned f_bits) {
  return 2ULL * clients * p * rounds * f_bits;
}

}  // namespace fedsel
