#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fedsel/consensus.hpp"

namespace fedsel {

enum class SigmaSource { Known, Estimated };
enum class SweepAxis { Clients, Tau, NLocal };

// Everything one experiment needs. Parsed from a single JSON document;
// unknown keys are rejected and `to_json` echoes every resolved default.
struct ExperimentConfig {
  // model
  std::size_t p = 100;
  std::size_t s0 = 5;
  double beta = 0.1;
  double sigma = 1e-2;
  std::optional<Matrix> covariance;  // empty = identity

  // network
  std::size_t clients = 10;
  std::size_t n_local = 20;

  // selection
  SelectionMode selection = SelectionMode::TopK;
  double tau = 0.0;
  std::size_t top_k = 25;
  double epsilon = 0.05;
  double delta = 0.05;

  // lambda
  LambdaMode lambda_mode = LambdaMode::CrossValidation;
  double lambda_k = 8.0;
  std::size_t cv_folds = 5;
  std::size_t cv_grid_size = 50;
  double cv_grid_ratio = 1e-4;

  // debias
  MMode m_mode = MMode::Nodewise;
  SigmaSource sigma_source = SigmaSource::Known;

  // fedavg
  bool fedavg = false;
  bool fedavg_baseline = true;
  bool centralized = true;
  std::optional<double> mu;
  std::size_t local_steps = 1;
  std::size_t max_rounds = 10000;
  double fedavg_tol = 1e-8;

  // constants
  double c_r = 1.0;
  double K = 2.0;
  unsigned f_bits = 32;

  // bounds
  double tau_min = 0.0;
  double tau_max = 0.1;
  std::size_t tau_points = 200;

  // sweep
  SweepAxis sweep_axis = SweepAxis::Clients;
  std::vector<double> sweep_grid;

  // real data
  std::size_t min_occurrence = 3;
  std::string response_column;
  std::string truth_path;

  std::uint64_t seed = 0;
  std::size_t replicates = 20;
  std::size_t jobs = 1;
  std::string output_dir = "out";

  std::size_t n_total() const noexcept { return clients * n_local; }

  // Stage-one settings for one replicate.
  ProtocolConfig protocol(std::uint64_t replicate_seed) const;

  // Single-line JSON of every resolved field.
  std::string to_json() const;
};

// Throws ConfigError naming the offending field path (e.g. "network.clients").
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace fedsel
