#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = z(rng);
  return m;
}

Vector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = z(rng);
  return v;
}

Matrix orthogonal_design(std::size_t n, std::size_t p, double scale, std::mt19937_64& rng) {
  if (p > n) throw std::invalid_argument("need p <= n");
  Matrix q = gaussian_matrix(n, p, rng);
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q * std::sqrt(scale);
}

Vector ols(const Matrix& X, const Vector& y) {
  const Matrix gram = X.transpose() * X;
  return gram.ldlt().solve(X.transpose() * y);
}

double kkt_violation(const Matrix& X, const Vector& y, const Vector& b, double lambda) {
  double worst = 0.0;
  const Vector r = y - X * b;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) g += 2.0 * X(i, j) * r[i];
    double v;
    if (b[j] > 0) v = std::abs(g - lambda);
    else if (b[j] < 0) v = std::abs(g + lambda);
    else v = std::max(0.0, std::abs(g) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

IndexSet enumerate_vote(const std::vector<IndexSet>& sets, std::size_t p, std::size_t quorum) {
  IndexSet out;
  for (std::size_t j = 0; j < p; ++j) {
    std::size_t votes = 0;
    for (const auto& s : sets)
      if (std::find(s.begin(), s.end(), j) != s.end()) ++votes;
    if (votes >= quorum) out.push_back(j);
  }
  return out;
}

std::uint64_t bits_for(std::size_t p) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < p) ++b;
  return b;
}

double binomial_upper_tail(double r, std::size_t n, std::size_t k) {
  std::vector<std::vector<double>> pascal(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    pascal[i].assign(i + 1, 1.0);
    for (std::size_t j = 1; j < i; ++j) pascal[i][j] = pascal[i - 1][j - 1] + pascal[i - 1][j];
  }
  double total = 0.0;
  for (std::size_t i = k; i <= n; ++i)
    total += pascal[n][i] * std::pow(r, static_cast<double>(i)) *
             std::pow(1.0 - r, static_cast<double>(n - i));
  return total;
}

double normal_cdf(double x) {
  // erf(z) = 2/sqrt(pi) * sum (-1)^k z^(2k+1) / (k! (2k+1))
  const double z = x / std::sqrt(2.0);
  double term = z, sum = z;
  for (int k = 1; k < 400; ++k) {
    term *= -z * z / k;
    const double add = term / (2 * k + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  const double erf = 2.0 / std::sqrt(3.14159265358979323846) * sum;
  return 0.5 * (1.0 + std::clamp(erf, -1.0, 1.0));
}

double max_abs(const Matrix& A) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) m = std::max(m, std::abs(A(i, j)));
  return m;
}

double max_col_l1(const Matrix& B) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < B.rows(); ++i) s += std::abs(B(i, j));
    m = std::max(m, s);
  }
  return m;
}

}  // namespace oracle
