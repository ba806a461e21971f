#include "fedsel/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fedsel/error.hpp"
#include "json.hpp"

namespace fedsel {

using nlohmann::json;

namespace {

// Walks one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_[key].is_null(); }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* raw(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return nullptr;
    return &node_[key];
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const json* v = raw(key);
    if (!v) return;
    out = convert<T>(*v, child_path(key));
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    const json* v = raw(key);
    if (!v) return;
    out = convert<T>(*v, child_path(key));
  }

  std::optional<Section> section(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    return Section(*v, child_path(key));
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(child_path(it.key()), "unknown key");
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
      return d;
    } else {
      static_assert(std::is_integral_v<T>);
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                     v.get<std::int64_t>() < 0))
        throw ConfigError(path, "expected a non-negative integer");
      return static_cast<T>(v.get<std::uint64_t>());
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

std::string selection_name(SelectionMode m) {
  switch (m) {
    case SelectionMode::Threshold: return "threshold";
    case SelectionMode::TopK: return "top_k";
    case SelectionMode::Interval: return "interval";
  }
  return "";
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Clients: return "N";
    case SweepAxis::Tau: return "tau";
    case SweepAxis::NLocal: return "n_local";
  }
  return "";
}

}  // namespace

ProtocolConfig ExperimentConfig::protocol(std::uint64_t replicate_seed) const {
  ProtocolConfig pc;
  pc.lambda_mode = lambda_mode;
  pc.lambda_k = lambda_k;
  pc.cv_folds = cv_folds;
  pc.cv_grid_size = cv_grid_size;
  pc.cv_grid_ratio = cv_grid_ratio;
  pc.m_mode = m_mode;
  pc.K = K;
  pc.selection = selection;
  pc.tau = tau;
  pc.top_k = top_k;
  pc.epsilon = epsilon;
  pc.delta = delta;
  pc.c_r = c_r;
  if (sigma_source == SigmaSource::Known) pc.sigma = sigma;
  pc.s0 = s0;
  pc.beta = beta;
  pc.covariance = covariance ? CovarianceSpec::explicit_matrix(*covariance)
                             : CovarianceSpec::identity();
  pc.f_bits = f_bits;
  pc.jobs = 1;
  pc.seed = replicate_seed;
  pc.run_fedavg = fedavg;
  pc.fedavg.mu = mu;
  pc.fedavg.local_steps = local_steps;
  pc.fedavg.max_rounds = max_rounds;
  pc.fedavg.tol = fedavg_tol;
  pc.fedavg.f_bits = f_bits;
  return pc;
}

std::string ExperimentConfig::to_json() const {
  json j;
  json cov = "identity";
  if (covariance) {
    cov = json::array();
    for (Eigen::Index r = 0; r < covariance->rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < covariance->cols(); ++c) row.push_back((*covariance)(r, c));
      cov.push_back(row);
    }
  }
  j["model"] = {{"p", p}, {"s0", s0}, {"beta", beta}, {"sigma", sigma}, {"covariance", cov}};
  j["network"] = {{"clients", clients}, {"n_local", n_local}};
  j["selection"] = {{"mode", selection_name(selection)}, {"tau", tau}, {"k", top_k},
                    {"epsilon", epsilon}, {"delta", delta}};
  j["lambda"] = {{"mode", lambda_mode == LambdaMode::Theory ? "theory" : "cv"},
                 {"k", lambda_k},
                 {"folds", cv_folds},
                 {"grid_size", cv_grid_size},
                 {"grid_ratio", cv_grid_ratio}};
  j["debias"] = {{"m_mode", m_mode == MMode::Nodewise ? "nodewise" : "known_covariance"},
                 {"sigma_source", sigma_source == SigmaSource::Known ? "known" : "estimated"}};
  j["fedavg"] = {{"enabled", fedavg},         {"baseline", fedavg_baseline},
                 {"centralized", centralized}, {"mu", mu ? json(*mu) : json(nullptr)},
                 {"local_steps", local_steps}, {"max_rounds", max_rounds},
                 {"tol", fedavg_tol}};
  j["constants"] = {{"c_r", c_r}, {"K", K}, {"f_bits", f_bits}};
  j["bounds"] = {{"tau_min", tau_min}, {"tau_max", tau_max}, {"points", tau_points}};
  j["sweep"] = {{"axis", axis_name(sweep_axis)}, {"grid", sweep_grid}};
  j["real"] = {{"min_occurrence", min_occurrence},
               {"response_column", response_column},
               {"truth_path", truth_path}};
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["jobs"] = jobs;
  j["output_dir"] = output_dir;
  return j.dump();
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig c;
  Section top(root, "");
  std::optional<std::size_t> k_given;

  if (auto s = top.section("model")) {
    s->read("p", c.p);
    s->read("s0", c.s0);
    s->read("beta", c.beta);
    s->read("sigma", c.sigma);
    if (const json* cov = s->raw("covariance")) {
      const std::string path = s->child_path("covariance");
      if (cov->is_string()) {
        require(cov->get<std::string>() == "identity", path, "expected \"identity\" or a matrix");
      } else {
        require(cov->is_array(), path, "expected \"identity\" or a matrix");
        const auto rows = static_cast<Eigen::Index>(cov->size());
        Matrix m(rows, rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
          const json& row = (*cov)[static_cast<std::size_t>(r)];
          require(row.is_array() && static_cast<Eigen::Index>(row.size()) == rows, path,
                  "matrix must be square");
          for (Eigen::Index col = 0; col < rows; ++col)
            m(r, col) = Section::convert<double>(row[static_cast<std::size_t>(col)], path);
        }
        c.covariance = std::move(m);
      }
    }
    s->finish();
  }
  if (auto s = top.section("network")) {
    s->read("clients", c.clients);
    s->read("n_local", c.n_local);
    s->finish();
  }
  if (auto s = top.section("selection")) {
    std::string mode = "top_k";
    s->read("mode", mode);
    if (mode == "top_k") c.selection = SelectionMode::TopK;
    else if (mode == "threshold") c.selection = SelectionMode::Threshold;
    else if (mode == "interval") c.selection = SelectionMode::Interval;
    else throw ConfigError(s->child_path("mode"), "expected top_k, threshold or interval");
    s->read("k", k_given);
    s->read("tau", c.tau);
    s->read("epsilon", c.epsilon);
    s->read("delta", c.delta);
    s->finish();
  }
  if (auto s = top.section("lambda")) {
    std::string mode = "cv";
    s->read("mode", mode);
    if (mode == "cv") c.lambda_mode = LambdaMode::CrossValidation;
    else if (mode == "theory") c.lambda_mode = LambdaMode::Theory;
    else throw ConfigError(s->child_path("mode"), "expected cv or theory");
    s->read("k", c.lambda_k);
    s->read("folds", c.cv_folds);
    s->read("grid_size", c.cv_grid_size);
    s->read("grid_ratio", c.cv_grid_ratio);
    s->finish();
  }
  if (auto s = top.section("debias")) {
    std::string m_mode = "nodewise", sigma_source = "known";
    s->read("m_mode", m_mode);
    s->read("sigma_source", sigma_source);
    if (m_mode == "nodewise") c.m_mode = MMode::Nodewise;
    else if (m_mode == "known_covariance") c.m_mode = MMode::KnownCovariance;
    else throw ConfigError(s->child_path("m_mode"), "expected nodewise or known_covariance");
    if (sigma_source == "known") c.sigma_source = SigmaSource::Known;
    else if (sigma_source == "estimated") c.sigma_source = SigmaSource::Estimated;
    else throw ConfigError(s->child_path("sigma_source"), "expected known or estimated");
    s->finish();
  }
  if (auto s = top.section("fedavg")) {
    s->read("enabled", c.fedavg);
    s->read("baseline", c.fedavg_baseline);
    s->read("centralized", c.centralized);
    s->read("mu", c.mu);
    s->read("local_steps", c.local_steps);
    s->read("max_rounds", c.max_rounds);
    s->read("tol", c.fedavg_tol);
    s->finish();
  }
  if (auto s = top.section("constants")) {
    s->read("c_r", c.c_r);
    s->read("K", c.K);
    s->read("f_bits", c.f_bits);
    s->finish();
  }
  if (auto s = top.section("bounds")) {
    s->read("tau_min", c.tau_min);
    s->read("tau_max", c.tau_max);
    s->read("points", c.tau_points);
    s->finish();
  }
  if (auto s = top.section("sweep")) {
    std::string axis = "N";
    s->read("axis", axis);
    if (axis == "N") c.sweep_axis = SweepAxis::Clients;
    else if (axis == "tau") c.sweep_axis = SweepAxis::Tau;
    else if (axis == "n_local") c.sweep_axis = SweepAxis::NLocal;
    else throw ConfigError(s->child_path("axis"), "expected N, tau or n_local");
    if (const json* grid = s->raw("grid")) {
      require(grid->is_array(), s->child_path("grid"), "expected an array");
      for (std::size_t k = 0; k < grid->size(); ++k)
        c.sweep_grid.push_back(Section::convert<double>(
            (*grid)[k], s->child_path("grid") + "[" + std::to_string(k) + "]"));
    }
    s->finish();
  }
  if (auto s = top.section("real")) {
    s->read("min_occurrence", c.min_occurrence);
    s->read("response_column", c.response_column);
    s->read("truth_path", c.truth_path);
    s->finish();
  }
  top.read("seed", c.seed);
  top.read("replicates", c.replicates);
  top.read("jobs", c.jobs);
  top.read("output_dir", c.output_dir);
  top.finish();

  require(c.p >= 2, "model.p", "must be at least 2");
  require(c.s0 >= 1 && c.s0 < c.p, "model.s0", "must satisfy 0 < s0 < p");
  require(c.beta > 0.0 && c.beta <= 1.0, "model.beta", "must lie in (0, 1]");
  require(c.sigma >= 0.0, "model.sigma", "must be non-negative");
  if (c.covariance) {
    require(static_cast<std::size_t>(c.covariance->rows()) == c.p, "model.covariance",
            "dimension must equal p");
    try {
      (void)CovarianceSpec::explicit_matrix(*c.covariance);
    } catch (const ParameterError& e) {
      throw ConfigError("model.covariance", e.what());
    }
  }
  require(c.clients >= 1, "network.clients", "must be at least 1");
  require(c.n_local >= 1, "network.n_local", "must be at least 1");

  c.top_k = k_given ? *k_given
                    : static_cast<std::size_t>(std::lround(25.0 * static_cast<double>(c.p) / 100.0));
  if (!k_given) c.top_k = std::clamp<std::size_t>(c.top_k, 1, c.p);
  require(c.top_k >= 1 && c.top_k <= c.p, "selection.k", "must satisfy 1 <= k <= p");
  if (c.selection == SelectionMode::Threshold)
    require(c.tau > 0.0, "selection.tau", "must be positive in threshold mode");
  require(c.epsilon > 0.0 && c.epsilon < 1.0, "selection.epsilon", "must lie in (0, 1)");
  require(c.delta > 0.0 && c.delta < 1.0, "selection.delta", "must lie in (0, 1)");

  require(c.lambda_k >= 8.0, "lambda.k", "must be at least 8");
  require(c.cv_folds >= 2, "lambda.folds", "must be at least 2");
  require(c.cv_grid_size >= 1, "lambda.grid_size", "must be at least 1");
  require(c.cv_grid_ratio > 0.0 && c.cv_grid_ratio <= 1.0, "lambda.grid_ratio",
          "must lie in (0, 1]");
  if (c.lambda_mode == LambdaMode::CrossValidation)
    require(c.n_local >= c.cv_folds, "lambda.folds", "exceeds the rows per client");

  if (c.mu) require(*c.mu > 0.0, "fedavg.mu", "must be positive");
  require(c.local_steps >= 1, "fedavg.local_steps", "must be at least 1");
  require(c.max_rounds >= 1, "fedavg.max_rounds", "must be at least 1");
  require(c.fedavg_tol > 0.0, "fedavg.tol", "must be positive");

  require(c.c_r >= 0.0, "constants.c_r", "must be non-negative");
  require(c.K > 0.0, "constants.K", "must be positive");
  require(c.f_bits >= 1 && c.f_bits <= 64, "constants.f_bits", "must lie in [1, 64]");

  require(c.tau_points >= 1, "bounds.points", "must be at least 1");
  require(c.tau_min >= 0.0, "bounds.tau_min", "must be non-negative");
  if (c.tau_points > 1)
    require(c.tau_max > c.tau_min, "bounds.tau_max", "must exceed tau_min");

  for (std::size_t k = 0; k < c.sweep_grid.size(); ++k) {
    const double v = c.sweep_grid[k];
    const std::string path = "sweep.grid[" + std::to_string(k) + "]";
    if (c.sweep_axis == SweepAxis::Tau) {
      require(v > 0.0, path, "tau must be positive");
    } else {
      require(v >= 1.0 && v == std::floor(v), path, "must be a positive integer");
    }
  }

  require(c.replicates >= 1, "replicates", "must be at least 1");
  require(c.jobs >= 1, "jobs", "must be at least 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fedsel
