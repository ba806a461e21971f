#include "fedsel/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedsel/error.hpp"

namespace fedsel {

FeatureSet threshold_features(const Vector& theta_d, double tau, std::size_t client_id) {
  if (!(tau > 0.0)) throw ParameterError("threshold must be positive");
  FeatureSet out{client_id, {}, tau};
  for (Eigen::Index j = 0; j < theta_d.size(); ++j)
    if (std::abs(theta_d[j]) >= tau) out.indices.push_back(static_cast<std::size_t>(j));
  return out;
}

FeatureSet threshold_features(const DebiasedFit& fit, double tau, std::size_t client_id) {
  return threshold_features(fit.theta_d, tau, client_id);
}

FeatureSet top_k_features(const Vector& theta_d, std::size_t k, std::size_t client_id) {
  const auto p = static_cast<std::size_t>(theta_d.size());
  if (k == 0 || k > p) throw ParameterError("top-k needs 1 <= k <= p");
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(theta_d[static_cast<Eigen::Index>(a)]) >
           std::abs(theta_d[static_cast<Eigen::Index>(b)]);
  });
  FeatureSet out;
  out.client_id = client_id;
  out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  out.threshold = std::abs(theta_d[static_cast<Eigen::Index>(order[k - 1])]);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

FeatureSet top_k_features(const DebiasedFit& fit, std::size_t k, std::size_t client_id) {
  return top_k_features(fit.theta_d, k, client_id);
}

double r_max(double sigma, std::size_t s0, std::size_t p, double n_local, double c_r) {
  if (!(n_local > 0.0)) throw ParameterError("n_local must be positive");
  return c_r * sigma * std::sqrt(static_cast<double>(s0)) * std::log(static_cast<double>(p)) /
         n_local;
}

double sigma_max(double sigma, std::size_t p, double n_local) {
  if (!(n_local > 0.0)) throw ParameterError("n_local must be positive");
  const double log_p = std::log(static_cast<double>(p));
  return std::sqrt(sigma * sigma / n_local * (1.0 + std::sqrt(log_p / n_local)));
}

ThresholdInterval threshold_interval(double beta, double sigma, std::size_t s0, std::size_t p,
                                     double n_local, double epsilon, double delta, double c_r) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw ParameterError("epsilon and delta must lie in (0, 1)");
  ThresholdInterval out;
  out.r_max = r_max(sigma, s0, p, n_local, c_r);
  out.sigma_max = sigma_max(sigma, p, n_local);
  const double spread = std::sqrt(2.0) * out.sigma_max;
  // log(1/(2 delta)) is negative for delta > 1/2; the tail term then vanishes.
  out.lower = out.r_max + spread * std::sqrt(std::log(1.0 / epsilon));
  out.upper = beta - out.r_max - spread * std::sqrt(std::max(0.0, std::log(0.5 / delta)));
  out.nonempty = out.lower <= out.upper;
  return out;
}

}  // namespace fedsel
