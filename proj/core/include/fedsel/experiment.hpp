#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedsel/config.hpp"
#include "fedsel/consensus.hpp"
#include "fedsel/fedavg.hpp"
#include "fedsel/metrics.hpp"

namespace fedsel {

// Seed of replicate r under master seed s.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);

// Named scalar outcomes of one replicate, in a fixed column order.
struct ReplicateOutcome {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> values;

  double get(const std::string& name) const;  // NaN when absent
};

// Everything a replicate produced, for callers that need more than scalars.
struct ReplicateArtifacts {
  GroundTruth truth;
  ProtocolResult protocol;
  std::vector<SelectionMetrics> client_metrics;
  SelectionMetrics server_metrics;
  std::optional<FedAvgResult> baseline;
  std::optional<Vector> centralized_theta;
};

// Synthetic replicate: generate truth and data, partition, run the protocol,
// and (when enabled) the FedAvg stage, the full-dimension FedAvg baseline and
// a centralized LASSO + least-squares refit.
ReplicateOutcome run_replicate(const ExperimentConfig& config, std::size_t replicate,
                               ReplicateArtifacts* artifacts = nullptr);

// Runs replicates 0..R-1 on up to config.jobs threads; output order is by
// replicate regardless of scheduling.
std::vector<ReplicateOutcome> run_replicates(const ExperimentConfig& config);

struct MetricSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;  // finite samples
};

std::map<std::string, MetricSummary> summarize(const std::vector<ReplicateOutcome>& outcomes);

// Centralized reference: CV LASSO on pooled data, least-squares refit on its support.
Vector centralized_lasso_refit(const Dataset& pooled, std::size_t cv_folds,
                               std::size_t grid_size, double grid_ratio, std::uint64_t seed);

// Subcommand bodies. Each writes its artifacts into `out_dir` (created if
// needed) and throws on failure; the CLI maps exceptions to exit codes.
void cmd_run(const ExperimentConfig& config, const std::string& out_dir);
void cmd_bounds(const ExperimentConfig& config, const std::string& out_dir);
void cmd_sweep(const ExperimentConfig& config, const std::string& out_dir);

struct RealRunReport {
  std::size_t rows = 0;
  std::size_t features = 0;
  IndexSet selected;  // original column indices
  std::optional<SelectionMetrics> metrics;
  std::uint64_t protocol_bits = 0;
  std::uint64_t baseline_bits = 0;
  std::size_t protocol_rounds = 0;
  std::size_t baseline_rounds = 0;
  std::vector<std::string> warnings;
};

RealRunReport cmd_real(const ExperimentConfig& config, const std::string& dataset_path,
                       const std::string& out_dir);

// Ground-truth list for real data: one entry per line, either an original
// column index or a column name resolved through the dataset header. Blank
// lines and lines starting with '#' are skipped. Names that do not match a
// retained column are appended to `unresolved` (or rejected when it is null).
IndexSet load_truth_list(const std::string& path, const Dataset& ds,
                         std::vector<std::string>* unresolved = nullptr);

}  // namespace fedsel
