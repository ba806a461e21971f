#pragma once

#include <cstddef>

#include "fedsel/debias.hpp"
#include "fedsel/types.hpp"

namespace fedsel {

// Indices a client reports to the server.
struct FeatureSet {
  std::size_t client_id = 0;
  IndexSet indices;  // sorted, unique
  double threshold = 0.0;
};

// Admissible per-client thresholds [lower, upper] for target FPR epsilon and
// miss rate delta.
struct ThresholdInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool nonempty = false;
  double r_max = 0.0;
  double sigma_max = 0.0;
};

// {j : |theta_d_j| >= tau}. Requires tau > 0.
FeatureSet threshold_features(const Vector& theta_d, double tau, std::size_t client_id = 0);
FeatureSet threshold_features(const DebiasedFit& fit, double tau, std::size_t client_id = 0);

// The k largest |theta_d_j|, ties to the lower index. The recorded threshold
// is the k-th largest magnitude.
FeatureSet top_k_features(const Vector& theta_d, std::size_t k, std::size_t client_id = 0);
FeatureSet top_k_features(const DebiasedFit& fit, std::size_t k, std::size_t client_id = 0);

// c_r * sigma * sqrt(s0) * log p / n_local
double r_max(double sigma, std::size_t s0, std::size_t p, double n_local, double c_r = 1.0);

// sqrt( sigma^2 / n_local * (1 + sqrt(log p / n_local)) )
double sigma_max(double sigma, std::size_t p, double n_local);

ThresholdInterval threshold_interval(double beta, double sigma, std::size_t s0, std::size_t p,
                                     double n_local, double epsilon, double delta,
                                     double c_r = 1.0);

}  // namespace fedsel
