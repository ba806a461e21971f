#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fedsel/types.hpp"

namespace fedsel {

// Row covariance of the synthetic design. `Identity` or an explicit
// symmetric positive-definite matrix with unit diagonal.
class CovarianceSpec {
 public:
  static CovarianceSpec identity() { return CovarianceSpec{}; }
  // Throws ParameterError unless `sigma` is symmetric, unit-diagonal and PD.
  static CovarianceSpec explicit_matrix(Matrix sigma);

  bool is_identity() const noexcept { return !matrix_.has_value(); }
  const Matrix& matrix() const { return *matrix_; }
  // Symmetric square root used for sampling; empty for identity.
  const Matrix& root() const { return *root_; }

 private:
  std::optional<Matrix> matrix_;
  std::optional<Matrix> root_;
};

struct GroundTruth {
  std::size_t p = 0;
  std::size_t s0 = 0;
  IndexSet support;  // sorted
  Vector theta_star;
  double beta = 0.0;
  double sigma = 0.0;
  CovarianceSpec covariance;

  // Provenance record; the explicit covariance matrix is written row-major.
  std::string to_json() const;
};

struct Dataset {
  Matrix X;
  Vector y;
  // Original column index for every retained column (identity for
  // synthetic data, filter map for ingested files).
  std::vector<std::size_t> column_map;
  std::vector<std::string> column_names;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

// Checks row/length agreement and finiteness; throws ParameterError.
void validate_dataset(const Dataset& ds);

struct Partition {
  std::vector<Dataset> shards;
  std::vector<std::size_t> client_sizes;
  // permutation[k] is the source row of the k-th row of the concatenated shards.
  std::vector<std::size_t> permutation;

  std::size_t clients() const noexcept { return shards.size(); }
  std::size_t total_rows() const noexcept;
};

GroundTruth generate_ground_truth(std::size_t p, std::size_t s0, double beta, double sigma,
                                  const CovarianceSpec& covariance, std::uint64_t seed);

Dataset sample_dataset(const GroundTruth& gt, std::size_t n, std::uint64_t seed);

// Random row permutation followed by a contiguous split into N shards whose
// sizes differ by at most one.
Partition partition_rows(const Dataset& ds, std::size_t clients, std::uint64_t seed);

// Inverse of partition_rows: stacks shards and undoes the permutation.
Dataset reassemble(const Partition& part);

// Extracts the given columns (in order) into a new dataset.
Dataset select_columns(const Dataset& ds, const IndexSet& columns);

// Binary design CSV: header line, comma separated, 0/1 feature columns and a
// real-valued response column. The response is the column named
// `response_column`, or the last column when that is empty. Features with at
// most `min_occurrence` ones are dropped.
Dataset load_binary_design_csv(const std::string& path, std::size_t min_occurrence = 3,
                               const std::string& response_column = {});

}  // namespace fedsel
