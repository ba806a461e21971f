#pragma once

// Closed-form bounds for per-client selection error rates, the effect of
// majority voting, tail bounds and sample complexity. Every unnamed
// order-of-magnitude constant is an explicit parameter defaulting to 1, so
// the curves reproduce the shape of the bounds, not their absolute scale.

#include <cstddef>
#include <span>
#include <vector>

namespace fedsel::theory {

// P(|Z| >= tau) for Z ~ N(mean, sd^2). sd == 0 gives the indicator |mean| >= tau.
double gauss_tail_two_sided(double tau, double mean, double sd);

// Per-client false positive rate bound: the two-sided tail maximised over
// the boundary cases R = +-r_max, sd in {0, sigma_max}. Returns 1 for tau <= r_max.
double fpr_upper(double tau, double r_max, double sigma_max);

// Per-client true positive rate bound
// 1 - erfc((beta - r_max - tau) / (sqrt(2) sigma_max)) / 2, clamped to [0, 1].
double tpr_lower(double tau, double beta, double r_max, double sigma_max);

// Probability that a dimension picked independently with probability r by
// each of N clients reaches the ceil(N/2) quorum.
double mv_probability(double r, std::size_t clients);

struct ConsensusExpectation {
  double false_positives = 0.0;
  double true_positives = 0.0;
};

ConsensusExpectation post_consensus_expectations(std::size_t p, std::size_t s0, double r_fp,
                                                 double r_tp, std::size_t clients);

struct MarkovTail {
  double fp_bound = 0.0;    // N^2 eps log p
  double tp_bound = 0.0;    // s0 (1 - N^2 delta), floored at 0
  double prob_floor = 0.0;  // 1 - (N^-2 + p^-1), floored at 0
};

MarkovTail markov_tail(double epsilon, double delta, std::size_t s0, std::size_t p,
                       std::size_t clients);

// KL divergence between Bernoulli(a) and Bernoulli(b); a, b in (0, 1).
double kl_bernoulli(double a, double b);

// min(1, b exp(-p D(gamma (1 + eps) || gamma))) for eps in (0, 1/gamma - 1).
double pelekis_tail(double gamma, double epsilon, std::size_t p, double b = 1.0);

enum class Regime { Centralized, Decentralized, Proposed };

// c / snr^2 * log(1 / (eps delta)), times N in the decentralized regime.
double sample_complexity(double epsilon, double delta, double snr, Regime regime,
                         std::size_t clients, double c = 1.0);

// Exponent of the explicit rate functions: with L = log p / n_local,
//   s0 (snr / sqrt(s0) - c L)_+^2 / (1 + sqrt(L)).
double rate_exponent(double snr, std::size_t s0, std::size_t p, double n_local, double c = 1.0);

// exp(-n_local * rate_exponent(...))
double explicit_fpr(double snr, std::size_t s0, std::size_t p, double n_local, double c = 1.0);
// 1 - exp(-n_local * rate_exponent(...))
double explicit_tpr(double snr, std::size_t s0, std::size_t p, double n_local, double c = 1.0);

struct BoundParams {
  double n_local = 0.0;
  std::size_t p = 0;
  std::size_t s0 = 0;
  double sigma = 0.0;
  double beta = 0.0;
  double c_r = 1.0;
};

struct BoundCurve {
  std::vector<double> thresholds;
  std::vector<double> fpr_upper;
  std::vector<double> tpr_lower;
  BoundParams params;
};

// Evaluates fpr_upper and tpr_lower over a strictly increasing tau grid.
BoundCurve bound_curve(std::span<const double> thresholds, const BoundParams& params);

// `count` evenly spaced points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace fedsel::theory
