#include "fedsel/metrics.hpp"

#include <algorithm>

#include "fedsel/error.hpp"

namespace fedsel {

SelectionMetrics score_selection(const IndexSet& selected, const IndexSet& support,
                                 std::size_t p) {
  std::vector<char> in_support(p, 0), in_selected(p, 0);
  for (std::size_t j : support) {
    if (j >= p) throw ParameterError("support index out of range");
    in_support[j] = 1;
  }
  for (std::size_t j : selected) {
    if (j >= p) throw ParameterError("selected index out of range");
    in_selected[j] = 1;
  }

  SelectionMetrics m;
  for (std::size_t j = 0; j < p; ++j) {
    if (in_selected[j]) {
      (in_support[j] ? m.tp : m.fp)++;
    } else {
      (in_support[j] ? m.fn : m.tn)++;
    }
  }
  const double tp = static_cast<double>(m.tp);
  const std::size_t picked = m.tp + m.fp;
  const std::size_t s0 = m.tp + m.fn;
  m.precision = picked == 0 ? 1.0 : tp / static_cast<double>(picked);
  m.recall_power = s0 == 0 ? 0.0 : tp / static_cast<double>(s0);
  m.f_measure = m.tp == 0 ? 0.0 : 2.0 * m.precision * m.recall_power /
                                       (m.precision + m.recall_power);
  m.accuracy = p == 0 ? 0.0 : static_cast<double>(m.tp + m.tn) / static_cast<double>(p);
  m.fdp = 1.0 - m.precision;
  return m;
}

SelectionMetrics score_selection(const IndexSet& selected, const GroundTruth& truth) {
  return score_selection(selected, truth.support, truth.p);
}

double score_regression(const Vector& theta_hat, const Vector& theta_star) {
  if (theta_hat.size() != theta_star.size()) throw ParameterError("length mismatch");
  if (theta_hat.size() == 0) throw ParameterError("empty vectors");
  return (theta_hat - theta_star).squaredNorm() / static_cast<double>(theta_hat.size());
}

double prediction_mse(const Matrix& X, const Vector& y, const Vector& theta) {
  if (X.rows() == 0) throw ParameterError("empty design");
  return (y - X * theta).squaredNorm() / static_cast<double>(X.rows());
}

}  // namespace fedsel
