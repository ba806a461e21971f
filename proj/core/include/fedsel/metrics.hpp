#pragma once

#include <cstddef>

#include "fedsel/datagen.hpp"
#include "fedsel/types.hpp"

namespace fedsel {

struct SelectionMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 1.0;  // 1 when nothing was selected
  double recall_power = 0.0;
  double f_measure = 0.0;
  double accuracy = 0.0;
  double fdp = 0.0;
};

// `selected` need not be sorted; duplicates count once.
SelectionMetrics score_selection(const IndexSet& selected, const IndexSet& support, std::size_t p);
SelectionMetrics score_selection(const IndexSet& selected, const GroundTruth& truth);

// ||theta_hat - theta_star||^2 / p
double score_regression(const Vector& theta_hat, const Vector& theta_star);

// ||y - X theta||^2 / n
double prediction_mse(const Matrix& X, const Vector& y, const Vector& theta);

}  // namespace fedsel
