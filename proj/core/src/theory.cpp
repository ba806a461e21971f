#include "fedsel/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedsel/error.hpp"

namespace fedsel::theory {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double gauss_tail_two_sided(double tau, double mean, double sd) {
  if (!(sd >= 0.0)) throw ParameterError("sd must be non-negative");
  if (!(tau >= 0.0)) throw ParameterError("tau must be non-negative");
  if (tau == 0.0) return 1.0;
  if (sd == 0.0) return std::abs(mean) >= tau ? 1.0 : 0.0;
  // P(Z >= tau) + P(Z <= -tau)
  const double upper = 0.5 * std::erfc((tau - mean) / (kSqrt2 * sd));
  const double lower = 0.5 * std::erfc((tau + mean) / (kSqrt2 * sd));
  return clamp01(upper + lower);
}

double fpr_upper(double tau, double r_max, double sigma_max) {
  if (!(tau > r_max)) return 1.0;
  double worst = 0.0;
  for (double mean : {r_max, -r_max})
    for (double sd : {0.0, sigma_max}) worst = std::max(worst, gauss_tail_two_sided(tau, mean, sd));
  return std::min(1.0, worst);
}

double tpr_lower(double tau, double beta, double r_max, double sigma_max) {
  if (tau <= 0.0) return 1.0;
  const double gap = beta - r_max - tau;
  if (sigma_max <= 0.0) return gap > 0.0 ? 1.0 : (gap == 0.0 ? 0.5 : 0.0);
  return clamp01(1.0 - 0.5 * std::erfc(gap / (kSqrt2 * sigma_max)));
}

double mv_probability(double r, std::size_t clients) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("r must lie in [0, 1]");
  if (clients == 0) throw ParameterError("need at least one client");
  const std::size_t quorum = (clients + 1) / 2;
  // Binomial coefficients are exact integers in double up to 2^53; beyond
  // that the relative error stays at machine precision.
  double coef = 1.0;  // C(N, i), advanced from i = 0
  double total = 0.0;
  for (std::size_t i = 0; i <= clients; ++i) {
    if (i >= quorum)
      total += coef * std::pow(r, static_cast<double>(i)) *
               std::pow(1.0 - r, static_cast<double>(clients - i));
    coef = coef * static_cast<double>(clients - i) / static_cast<double>(i + 1);
  }
  return clamp01(total);
}

ConsensusExpectation post_consensus_expectations(std::size_t p, std::size_t s0, double r_fp,
                                                 double r_tp, std::size_t clients) {
  if (s0 > p) throw ParameterError("s0 exceeds p");
  return {static_cast<double>(p - s0) * mv_probability(r_fp, clients),
          static_cast<double>(s0) * mv_probability(r_tp, clients)};
}

MarkovTail markov_tail(double epsilon, double delta, std::size_t s0, std::size_t p,
                       std::size_t clients) {
  if (!(epsilon >= 0.0 && epsilon < 1.0) || !(delta >= 0.0 && delta < 1.0))
    throw ParameterError("epsilon and delta must lie in [0, 1)");
  if (clients == 0 || p == 0) throw ParameterError("need p, N >= 1");
  const double n2 = static_cast<double>(clients) * static_cast<double>(clients);
  MarkovTail out;
  out.fp_bound = n2 * epsilon * std::log(static_cast<double>(p));
  out.tp_bound = std::max(0.0, static_cast<double>(s0) * (1.0 - n2 * delta));
  out.prob_floor = std::max(0.0, 1.0 - (1.0 / n2 + 1.0 / static_cast<double>(p)));
  return out;
}

double kl_bernoulli(double a, double b) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0))
    throw ParameterError("Bernoulli parameters must lie in (0, 1)");
  return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
}

double pelekis_tail(double gamma, double epsilon, std::size_t p, double b) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0 / gamma - 1.0))
    throw ParameterError("epsilon must lie in (0, 1/gamma - 1)");
  if (!(b >= 1.0)) throw ParameterError("b must be at least 1");
  const double d = kl_bernoulli(gamma * (1.0 + epsilon), gamma);
  return std::min(1.0, b * std::exp(-static_cast<double>(p) * d));
}

double sample_complexity(double epsilon, double delta, double snr, Regime regime,
                         std::size_t clients, double c) {
  if (!(snr > 0.0)) throw ParameterError("snr must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw ParameterError("epsilon and delta must lie in (0, 1)");
  const double base = c / (snr * snr) * std::log(1.0 / (epsilon * delta));
  return regime == Regime::Decentralized ? static_cast<double>(clients) * base : base;
}

double rate_exponent(double snr, std::size_t s0, std::size_t p, double n_local, double c) {
  if (!(n_local > 0.0) || s0 == 0) throw ParameterError("need n_local > 0 and s0 >= 1");
  const double L = std::log(static_cast<double>(p)) / n_local;
  const double margin = std::max(0.0, snr / std::sqrt(static_cast<double>(s0)) - c * L);
  return static_cast<double>(s0) * margin * margin / (1.0 + std::sqrt(L));
}

double explicit_fpr(double snr, std::size_t s0, std::size_t p, double n_local, double c) {
  return std::exp(-n_local * rate_exponent(snr, s0, p, n_local, c));
}

double explicit_tpr(double snr, std::size_t s0, std::size_t p, double n_local, double c) {
  return 1.0 - explicit_fpr(snr, s0, p, n_local, c);
}

BoundCurve bound_curve(std::span<const double> thresholds, const BoundParams& params) {
  if (thresholds.empty()) throw ParameterError("threshold grid is empty");
  for (std::size_t k = 1; k < thresholds.size(); ++k)
    if (!(thresholds[k] > thresholds[k - 1]))
      throw ParameterError("threshold grid must be strictly increasing");

  const double n = params.n_local;
  const double log_p = std::log(static_cast<double>(params.p));
  const double rmax =
      params.c_r * params.sigma * std::sqrt(static_cast<double>(params.s0)) * log_p / n;
  const double smax =
      std::sqrt(params.sigma * params.sigma / n * (1.0 + std::sqrt(log_p / n)));

  BoundCurve curve;
  curve.params = params;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double tau : thresholds) {
    curve.fpr_upper.push_back(fpr_upper(tau, rmax, smax));
    curve.tpr_lower.push_back(tpr_lower(tau, params.beta, rmax, smax));
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw ParameterError("grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  return out;
}

}  // namespace fedsel::theory
