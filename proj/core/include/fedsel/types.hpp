#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fedsel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted, duplicate-free list of column indices.
using IndexSet = std::vector<std::size_t>;

}  // namespace fedsel
