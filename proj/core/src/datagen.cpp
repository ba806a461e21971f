#include "fedsel/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "csv_writer.hpp"
#include "fedsel/error.hpp"

namespace fedsel {

CovarianceSpec CovarianceSpec::explicit_matrix(Matrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw ParameterError("covariance must be a non-empty square matrix");
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw ParameterError("covariance must be symmetric");
  if ((sigma.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12)
    throw ParameterError("covariance must have unit diagonal");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-12)
    throw ParameterError("covariance is not positive definite");

  CovarianceSpec spec;
  spec.root_ = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
               eig.eigenvectors().transpose();
  spec.matrix_ = std::move(sigma);
  return spec;
}

std::string GroundTruth::to_json() const {
  std::ostringstream os;
  os << "{\"p\":" << p << ",\"s0\":" << s0 << ",\"beta\":" << detail::format_double(beta)
     << ",\"sigma\":" << detail::format_double(sigma) << ",\"support\":[";
  for (std::size_t k = 0; k < support.size(); ++k) os << (k ? "," : "") << support[k];
  os << "],\"theta_star\":[";
  for (Eigen::Index j = 0; j < theta_star.size(); ++j)
    os << (j ? "," : "") << detail::format_double(theta_star[j]);
  os << "],\"covariance\":";
  if (covariance.is_identity()) {
    os << "\"identity\"";
  } else {
    const Matrix& m = covariance.matrix();
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      os << (i ? "," : "") << "[";
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        os << (j ? "," : "") << detail::format_double(m(i, j));
      os << "]";
    }
    os << "]";
  }
  os << "}";
  return os.str();
}

void validate_dataset(const Dataset& ds) {
  if (ds.X.rows() != ds.y.size())
    throw ParameterError("design has " + std::to_string(ds.X.rows()) + " rows but response has " +
                         std::to_string(ds.y.size()) + " entries");
  if (!ds.X.allFinite() || !ds.y.allFinite())
    throw ParameterError("dataset contains NaN or Inf");
}

std::size_t Partition::total_rows() const noexcept {
  return std::accumulate(client_sizes.begin(), client_sizes.end(), std::size_t{0});
}

GroundTruth generate_ground_truth(std::size_t p, std::size_t s0, double beta, double sigma,
                                  const CovarianceSpec& covariance, std::uint64_t seed) {
  if (s0 == 0 || s0 >= p) throw ParameterError("need 0 < s0 < p");
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in (0, 1]");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!covariance.is_identity() && static_cast<std::size_t>(covariance.matrix().rows()) != p)
    throw ParameterError("covariance dimension does not match p");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);

  GroundTruth gt;
  gt.p = p;
  gt.s0 = s0;
  gt.beta = beta;
  gt.sigma = sigma;
  gt.covariance = covariance;
  gt.support.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s0));
  std::sort(gt.support.begin(), gt.support.end());
  gt.theta_star = Vector::Zero(static_cast<Eigen::Index>(p));

  std::uniform_real_distribution<double> magnitude(beta, 1.0);
  std::bernoulli_distribution negative(0.5);
  for (std::size_t j : gt.support) {
    const double m = beta >= 1.0 ? 1.0 : std::clamp(magnitude(rng), beta, 1.0);
    gt.theta_star[static_cast<Eigen::Index>(j)] = negative(rng) ? -m : m;
  }
  return gt;
}

Dataset sample_dataset(const GroundTruth& gt, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample size must be positive");
  if (!(gt.sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(gt.p);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix Z(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) Z(i, j) = normal(rng);

  Dataset ds;
  ds.X = gt.covariance.is_identity() ? std::move(Z) : Matrix(Z * gt.covariance.root());
  ds.y = ds.X * gt.theta_star;
  if (gt.sigma > 0.0)
    for (Eigen::Index i = 0; i < rows; ++i) ds.y[i] += gt.sigma * normal(rng);
  ds.column_map.resize(gt.p);
  std::iota(ds.column_map.begin(), ds.column_map.end(), std::size_t{0});
  return ds;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto src = static_cast<Eigen::Index>(rows[k]);
    out.X.row(static_cast<Eigen::Index>(k)) = ds.X.row(src);
    out.y[static_cast<Eigen::Index>(k)] = ds.y[src];
  }
  out.column_map = ds.column_map;
  out.column_names = ds.column_names;
  return out;
}

}  // namespace

Partition partition_rows(const Dataset& ds, std::size_t clients, std::uint64_t seed) {
  validate_dataset(ds);
  if (clients == 0) throw ParameterError("need at least one client");
  const std::size_t n = ds.rows();
  if (clients > n)
    throw InsufficientDataError("cannot split " + std::to_string(n) + " rows across " +
                                std::to_string(clients) + " clients");

  Partition part;
  part.permutation.resize(n);
  std::iota(part.permutation.begin(), part.permutation.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(part.permutation.begin(), part.permutation.end(), rng);

  const std::size_t base = n / clients;
  const std::size_t extra = n % clients;
  std::size_t offset = 0;
  for (std::size_t c = 0; c < clients; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    std::vector<std::size_t> rows(part.permutation.begin() + static_cast<std::ptrdiff_t>(offset),
                                  part.permutation.begin() +
                                      static_cast<std::ptrdiff_t>(offset + size));
    part.shards.push_back(take_rows(ds, rows));
    part.client_sizes.push_back(size);
    offset += size;
  }
  return part;
}

Dataset reassemble(const Partition& part) {
  if (part.shards.empty()) throw ParameterError("empty partition");
  const auto n = static_cast<Eigen::Index>(part.total_rows());
  Dataset out;
  out.X.resize(n, part.shards.front().X.cols());
  out.y.resize(n);
  std::size_t k = 0;
  for (const auto& shard : part.shards) {
    for (Eigen::Index r = 0; r < shard.X.rows(); ++r, ++k) {
      const auto dst = static_cast<Eigen::Index>(part.permutation.at(k));
      out.X.row(dst) = shard.X.row(r);
      out.y[dst] = shard.y[r];
    }
  }
  out.column_map = part.shards.front().column_map;
  out.column_names = part.shards.front().column_names;
  return out;
}

Dataset select_columns(const Dataset& ds, const IndexSet& columns) {
  Dataset out;
  out.X.resize(ds.X.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= ds.cols()) throw ParameterError("column index out of range");
    out.X.col(static_cast<Eigen::Index>(k)) = ds.X.col(static_cast<Eigen::Index>(columns[k]));
    if (!ds.column_map.empty()) out.column_map.push_back(ds.column_map[columns[k]]);
    if (!ds.column_names.empty()) out.column_names.push_back(ds.column_names[columns[k]]);
  }
  out.y = ds.y;
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset load_binary_design_csv(const std::string& path, std::size_t min_occurrence,
                               const std::string& response_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty file", 0);
  for (auto& h : header) h = trim(h);
  if (header.size() < 2) throw ParseError("need at least one feature and a response", line_no);

  std::size_t response = header.size() - 1;
  if (!response_column.empty()) {
    auto it = std::find(header.begin(), header.end(), response_column);
    if (it == header.end())
      throw ParseError("response column '" + response_column + "' not in header", line_no);
    response = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<unsigned char>> features;
  std::vector<double> responses;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    std::vector<unsigned char> row;
    row.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      if (c == response) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
          throw ParseError("response '" + cell + "' is not a finite number", line_no);
        responses.push_back(v);
      } else if (cell == "0" || cell == "1") {
        row.push_back(cell == "1" ? 1 : 0);
      } else {
        throw ParseError("feature '" + header[c] + "' has non-binary value '" + cell + "'",
                         line_no);
      }
    }
    features.push_back(std::move(row));
  }
  if (features.empty()) throw ParseError("no data rows", line_no);

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != response) feature_names.push_back(header[c]);

  std::vector<std::size_t> counts(feature_names.size(), 0);
  for (const auto& row : features)
    for (std::size_t c = 0; c < row.size(); ++c) counts[c] += row[c];

  Dataset ds;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > min_occurrence) {
      ds.column_map.push_back(c);
      ds.column_names.push_back(feature_names[c]);
    }
  }
  const auto n = static_cast<Eigen::Index>(features.size());
  ds.X.resize(n, static_cast<Eigen::Index>(ds.column_map.size()));
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ds.y[i] = responses[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < ds.column_map.size(); ++k)
      ds.X(i, static_cast<Eigen::Index>(k)) = features[static_cast<std::size_t>(i)][ds.column_map[k]];
  }
  return ds;
}

}  // namespace fedsel
