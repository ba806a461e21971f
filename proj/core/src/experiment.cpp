#include "fedsel/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "csv_writer.hpp"
#include "fedsel/error.hpp"
#include "fedsel/lasso.hpp"
#include "fedsel/theory.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fedsel {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kReplicateSalt = 0x7e911ca7e;
constexpr std::uint64_t kTruthStream = 0;
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kPartitionStream = 2;
constexpr std::uint64_t kCentralStream = 3;
constexpr std::uint64_t kStreamSalt = 0xda7a;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::derive_seed(seed, stream, kStreamSalt);
}

// Resolved config minus the settings that do not influence results, so the
// provenance block is identical across --jobs and --out choices.
json provenance(const ExperimentConfig& config, const std::string& command) {
  json cfg = json::parse(config.to_json());
  cfg.erase("jobs");
  cfg.erase("output_dir");
  return json{{"command", command}, {"config", cfg}, {"master_seed", config.seed}};
}

void write_provenance(std::ostream& os, const json& prov) {
  detail::write_provenance(os, prov.dump());
}

void write_json(const fs::path& path, const json& doc) {
  auto os = detail::open_output(path);
  os << doc.dump(2) << '\n';
  if (!os) throw IoError("failed writing " + path.string());
}

void write_ledger(const fs::path& path, const CommLedger& ledger, const json& prov) {
  auto os = detail::open_output(path);
  write_provenance(os, prov);
  ledger.write_csv(os);
  if (!os) throw IoError("failed writing " + path.string());
}

void write_history(const fs::path& path, const FedAvgState& state, const json& prov) {
  auto os = detail::open_output(path);
  write_provenance(os, prov);
  os << "round,mse,max_delta,loss\n";
  for (const auto& rec : state.history)
    os << rec.round << ',' << detail::format_double(rec.mse) << ','
       << detail::format_double(rec.max_delta) << ',' << detail::format_double(rec.loss) << '\n';
  if (!os) throw IoError("failed writing " + path.string());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

CovarianceSpec covariance_of(const ExperimentConfig& config) {
  return config.covariance ? CovarianceSpec::explicit_matrix(*config.covariance)
                           : CovarianceSpec::identity();
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void push_selection(ReplicateOutcome& out, const std::string& prefix,
                    const std::vector<SelectionMetrics>& ms) {
  auto avg = [&](auto field) {
    std::vector<double> v;
    for (const auto& m : ms) v.push_back(static_cast<double>(m.*field));
    return mean_of(v);
  };
  out.values.emplace_back(prefix + "precision", avg(&SelectionMetrics::precision));
  out.values.emplace_back(prefix + "recall", avg(&SelectionMetrics::recall_power));
  out.values.emplace_back(prefix + "f_measure", avg(&SelectionMetrics::f_measure));
  out.values.emplace_back(prefix + "fdp", avg(&SelectionMetrics::fdp));
  out.values.emplace_back(prefix + "accuracy", avg(&SelectionMetrics::accuracy));
  out.values.emplace_back(prefix + "tp", avg(&SelectionMetrics::tp));
  out.values.emplace_back(prefix + "fp", avg(&SelectionMetrics::fp));
}

double mse_at_round(const FedAvgState& state, std::size_t round, double at_zero) {
  if (round == 0 || state.history.empty()) return at_zero;
  const std::size_t k = std::min(round, state.history.size());
  return state.history[k - 1].mse;
}

ReplicateOutcome run_replicate_impl(const ExperimentConfig& config, std::size_t r,
                                    ReplicateArtifacts* artifacts) {
  ReplicateOutcome out;
  out.replicate = r;
  out.seed = replicate_seed(config.seed, r);

  const GroundTruth truth = generate_ground_truth(config.p, config.s0, config.beta, config.sigma,
                                                  covariance_of(config),
                                                  stream_seed(out.seed, kTruthStream));
  const Dataset pooled = sample_dataset(truth, config.n_total(), stream_seed(out.seed, kSampleStream));
  const Partition part = partition_rows(pooled, config.clients, stream_seed(out.seed, kPartitionStream));

  ProtocolConfig pc = config.protocol(out.seed);
  pc.fedavg.theta_star = truth.theta_star;
  ProtocolResult result = run_protocol(part, pc);

  std::vector<SelectionMetrics> client_metrics;
  for (const auto& fs : result.client_sets) client_metrics.push_back(score_selection(fs.indices, truth));
  const SelectionMetrics server = score_selection(result.consensus.selected, truth);

  push_selection(out, "client_", client_metrics);
  push_selection(out, "server_", {server});
  out.values.emplace_back("server_selected", static_cast<double>(result.consensus.selected.size()));
  out.values.emplace_back("stage_one_bits",
                          static_cast<double>(result.ledger.bits(Phase::FeatureUpload)));
  out.values.emplace_back("protocol_bits", static_cast<double>(result.ledger.total_bits()));

  const double zero_mse = truth.theta_star.squaredNorm() / static_cast<double>(config.p);
  std::size_t restricted_rounds = 0;
  if (config.fedavg) {
    double mse = zero_mse, pred = prediction_mse(pooled.X, pooled.y, Vector::Zero(pooled.X.cols()));
    double converged = 1.0;
    if (result.fedavg) {
      restricted_rounds = result.fedavg->state.round;
      const Vector theta = result.fedavg->full_theta(config.p);
      mse = score_regression(theta, truth.theta_star);
      pred = prediction_mse(pooled.X, pooled.y, theta);
      converged = result.fedavg->converged ? 1.0 : 0.0;
    }
    out.values.emplace_back("fedavg_rounds", static_cast<double>(restricted_rounds));
    out.values.emplace_back("fedavg_converged", converged);
    out.values.emplace_back("fedavg_mse", mse);
    out.values.emplace_back("fedavg_prediction_mse", pred);
  }

  std::optional<FedAvgResult> baseline;
  if (config.fedavg && config.fedavg_baseline) {
    FedAvgOptions opts = pc.fedavg;
    opts.jobs = 1;
    baseline = run_fedavg(part, {}, opts);
    const double bits = static_cast<double>(baseline->ledger.total_bits());
    out.values.emplace_back("baseline_rounds", static_cast<double>(baseline->state.round));
    out.values.emplace_back("baseline_converged", baseline->converged ? 1.0 : 0.0);
    out.values.emplace_back("baseline_mse",
                            score_regression(baseline->state.theta, truth.theta_star));
    out.values.emplace_back("baseline_mse_at_rounds",
                            mse_at_round(baseline->state, restricted_rounds, zero_mse));
    out.values.emplace_back("baseline_bits", bits);
    out.values.emplace_back("cost_ratio", bits / static_cast<double>(result.ledger.total_bits()));
  }

  std::optional<Vector> central;
  if (config.centralized) {
    central = centralized_lasso_refit(pooled, config.cv_folds, config.cv_grid_size,
                                      config.cv_grid_ratio, stream_seed(out.seed, kCentralStream));
    out.values.emplace_back("centralized_mse", score_regression(*central, truth.theta_star));
  }

  if (artifacts) {
    artifacts->truth = truth;
    artifacts->protocol = std::move(result);
    artifacts->client_metrics = std::move(client_metrics);
    artifacts->server_metrics = server;
    artifacts->baseline = std::move(baseline);
    artifacts->centralized_theta = std::move(central);
  }
  return out;
}

std::vector<ReplicateOutcome> run_all(const ExperimentConfig& config,
                                      ReplicateArtifacts* first) {
  std::vector<ReplicateOutcome> out(config.replicates);
  detail::parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
    out[r] = run_replicate_impl(config, r, r == 0 ? first : nullptr);
  });
  return out;
}

void write_metrics_csv(const fs::path& path, const std::vector<ReplicateOutcome>& outcomes,
                       const json& prov) {
  auto os = detail::open_output(path);
  write_provenance(os, prov);
  os << "replicate,seed";
  if (!outcomes.empty())
    for (const auto& [name, v] : outcomes.front().values) os << ',' << name;
  os << '\n';
  for (const auto& o : outcomes) {
    os << o.replicate << ',' << o.seed;
    for (const auto& [name, v] : o.values) os << ',' << detail::format_double(v);
    os << '\n';
  }
  if (!os) throw IoError("failed writing " + path.string());
}

json summary_json(const std::vector<ReplicateOutcome>& outcomes) {
  json metrics = json::object();
  for (const auto& [name, s] : summarize(outcomes))
    metrics[name] = {{"mean", number_or_null(s.mean)},
                     {"stderr", number_or_null(s.stderr_)},
                     {"count", s.count}};
  return metrics;
}

std::vector<std::string> metric_order(const std::vector<ReplicateOutcome>& outcomes) {
  std::vector<std::string> names;
  if (!outcomes.empty())
    for (const auto& [name, v] : outcomes.front().values) names.push_back(name);
  return names;
}

void write_client_table(const fs::path& path, const ReplicateArtifacts& art, const json& prov) {
  auto os = detail::open_output(path);
  write_provenance(os, prov);
  os << "client_id,rows,lambda,lambda_tilde,sigma_hat,lasso_converged,threshold,selected,tp,fp\n";
  for (std::size_t i = 0; i < art.protocol.diagnostics.size(); ++i) {
    const auto& d = art.protocol.diagnostics[i];
    const auto& m = art.client_metrics[i];
    os << d.client_id << ',' << d.rows << ',' << detail::format_double(d.lambda) << ','
       << detail::format_double(d.lambda_tilde) << ',' << detail::format_double(d.sigma_hat) << ','
       << (d.lasso_converged ? 1 : 0) << ',' << detail::format_double(d.threshold) << ','
       << art.protocol.client_sets[i].indices.size() << ',' << m.tp << ',' << m.fp << '\n';
  }
  if (!os) throw IoError("failed writing " + path.string());
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate) {
  return detail::derive_seed(master, replicate, kReplicateSalt);
}

double ReplicateOutcome::get(const std::string& name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  return kNaN;
}

ReplicateOutcome run_replicate(const ExperimentConfig& config, std::size_t replicate,
                               ReplicateArtifacts* artifacts) {
  return run_replicate_impl(config, replicate, artifacts);
}

std::vector<ReplicateOutcome> run_replicates(const ExperimentConfig& config) {
  return run_all(config, nullptr);
}

std::map<std::string, MetricSummary> summarize(const std::vector<ReplicateOutcome>& outcomes) {
  std::map<std::string, std::vector<double>> samples;
  for (const auto& o : outcomes)
    for (const auto& [name, v] : o.values) {
      auto& bucket = samples[name];
      if (std::isfinite(v)) bucket.push_back(v);
    }
  std::map<std::string, MetricSummary> out;
  for (const auto& [name, v] : samples) {
    MetricSummary s;
    s.count = v.size();
    s.mean = mean_of(v);
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    } else {
      s.stderr_ = v.empty() ? kNaN : 0.0;
    }
    out[name] = s;
  }
  return out;
}

Vector centralized_lasso_refit(const Dataset& pooled, std::size_t cv_folds, std::size_t grid_size,
                               double grid_ratio, std::uint64_t seed) {
  validate_dataset(pooled);
  const auto grid = default_lambda_grid(pooled.X, pooled.y, grid_size, grid_ratio);
  const double lambda = cross_validate(pooled.X, pooled.y, cv_folds, grid, seed).lambda;
  const LassoFit fit = fit_lasso(pooled.X, pooled.y, lambda);

  IndexSet support;
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
    if (fit.coefficients[j] != 0.0) support.push_back(static_cast<std::size_t>(j));
  Vector out = Vector::Zero(pooled.X.cols());
  if (support.empty()) return out;

  Matrix Xs(pooled.X.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k)
    Xs.col(static_cast<Eigen::Index>(k)) = pooled.X.col(static_cast<Eigen::Index>(support[k]));
  const Vector beta = Xs.colPivHouseholderQr().solve(pooled.y);
  for (std::size_t k = 0; k < support.size(); ++k)
    out[static_cast<Eigen::Index>(support[k])] = beta[static_cast<Eigen::Index>(k)];
  return out;
}

void cmd_run(const ExperimentConfig& config, const std::string& out_dir) {
  ReplicateArtifacts first;
  const auto outcomes = run_all(config, &first);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const json prov = provenance(config, "run");

  write_metrics_csv(dir / "metrics.csv", outcomes, prov);
  write_json(dir / "summary.json", {{"provenance", prov},
                                    {"replicates", outcomes.size()},
                                    {"metric_order", metric_order(outcomes)},
                                    {"metrics", summary_json(outcomes)}});
  write_ledger(dir / "ledger.csv", first.protocol.ledger, prov);
  write_client_table(dir / "clients.csv", first, prov);
  if (config.fedavg) {
    FedAvgState empty;
    write_history(dir / "fedavg_history.csv",
                  first.protocol.fedavg ? first.protocol.fedavg->state : empty, prov);
  }
  if (first.baseline) {
    write_ledger(dir / "baseline_ledger.csv", first.baseline->ledger, prov);
    write_history(dir / "baseline_history.csv", first.baseline->state, prov);
  }
}

void cmd_bounds(const ExperimentConfig& config, const std::string& out_dir) {
  const auto grid = theory::linear_grid(config.tau_min, config.tau_max, config.tau_points);
  theory::BoundParams params;
  params.n_local = static_cast<double>(config.n_local);
  params.p = config.p;
  params.s0 = config.s0;
  params.sigma = config.sigma;
  params.beta = config.beta;
  params.c_r = config.c_r;
  const theory::BoundCurve curve = theory::bound_curve(grid, params);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const json prov = provenance(config, "bounds");

  {
    auto os = detail::open_output(dir / "bounds.csv");
    write_provenance(os, prov);
    os << "tau,fpr_upper,tpr_lower,server_fp_expected,server_tp_expected\n";
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
      const auto e = theory::post_consensus_expectations(config.p, config.s0, curve.fpr_upper[k],
                                                         curve.tpr_lower[k], config.clients);
      os << detail::format_double(curve.thresholds[k]) << ','
         << detail::format_double(curve.fpr_upper[k]) << ','
         << detail::format_double(curve.tpr_lower[k]) << ','
         << detail::format_double(e.false_positives) << ','
         << detail::format_double(e.true_positives) << '\n';
    }
    if (!os) throw IoError("failed writing bounds.csv");
  }

  const double n_local = static_cast<double>(config.n_local);
  const ThresholdInterval iv = threshold_interval(config.beta, config.sigma, config.s0, config.p,
                                                  n_local, config.epsilon, config.delta, config.c_r);
  const auto tail = theory::markov_tail(config.epsilon, config.delta, config.s0, config.p,
                                        config.clients);
  json doc = {{"provenance", prov},
              {"interval",
               {{"lower", iv.lower},
                {"upper", iv.upper},
                {"nonempty", iv.nonempty},
                {"r_max", iv.r_max},
                {"sigma_max", iv.sigma_max}}},
              {"markov_tail",
               {{"fp_bound", tail.fp_bound},
                {"tp_bound", tail.tp_bound},
                {"probability_floor", tail.prob_floor}}}};
  if (config.sigma > 0.0) {
    const double snr = config.beta / config.sigma;
    doc["explicit_rates"] = {
        {"snr", snr},
        {"fpr", number_or_null(theory::explicit_fpr(snr, config.s0, config.p, n_local))},
        {"tpr", number_or_null(theory::explicit_tpr(snr, config.s0, config.p, n_local))}};
    doc["sample_complexity"] = {
        {"centralized", theory::sample_complexity(config.epsilon, config.delta, snr,
                                                  theory::Regime::Centralized, config.clients)},
        {"decentralized", theory::sample_complexity(config.epsilon, config.delta, snr,
                                                    theory::Regime::Decentralized, config.clients)}};
  }
  write_json(dir / "bounds_summary.json", doc);
}

void cmd_sweep(const ExperimentConfig& config, const std::string& out_dir) {
  if (config.sweep_grid.empty()) throw ConfigError("sweep.grid", "sweep grid is empty");
  for (double v : config.sweep_grid) {
    const bool ok = config.sweep_axis == SweepAxis::Tau ? v > 0.0
                                                        : (v >= 1.0 && v == std::floor(v));
    if (!ok) throw ConfigError("sweep.grid", "invalid value for the sweep axis");
  }

  std::vector<std::vector<ReplicateOutcome>> results;
  for (double value : config.sweep_grid) {
    ExperimentConfig point = config;
    switch (config.sweep_axis) {
      case SweepAxis::Clients: point.clients = static_cast<std::size_t>(value); break;
      case SweepAxis::NLocal: point.n_local = static_cast<std::size_t>(value); break;
      case SweepAxis::Tau:
        point.selection = SelectionMode::Threshold;
        point.tau = value;
        break;
    }
    results.push_back(run_all(point, nullptr));
  }

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const json prov = provenance(config, "sweep");

  auto os = detail::open_output(dir / "sweep.csv");
  write_provenance(os, prov);
  os << "axis_value,replicate,metric,value\n";
  for (std::size_t k = 0; k < results.size(); ++k)
    for (const auto& o : results[k])
      for (const auto& [name, v] : o.values)
        os << detail::format_double(config.sweep_grid[k]) << ',' << o.replicate << ',' << name
           << ',' << detail::format_double(v) << '\n';
  if (!os) throw IoError("failed writing sweep.csv");

  auto ss = detail::open_output(dir / "sweep_summary.csv");
  write_provenance(ss, prov);
  ss << "axis_value,metric,mean,stderr,count\n";
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto summary = summarize(results[k]);
    for (const auto& name : metric_order(results[k])) {
      const auto& s = summary.at(name);
      ss << detail::format_double(config.sweep_grid[k]) << ',' << name << ','
         << detail::format_double(s.mean) << ',' << detail::format_double(s.stderr_) << ','
         << s.count << '\n';
    }
  }
  if (!ss) throw IoError("failed writing sweep_summary.csv");
}

IndexSet load_truth_list(const std::string& path, const Dataset& ds,
                         std::vector<std::string>* unresolved) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read truth list " + path);
  IndexSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    if (std::all_of(entry.begin(), entry.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; })) {
      try {
        out.push_back(static_cast<std::size_t>(std::stoull(entry)));
      } catch (const std::out_of_range&) {
        throw ParseError("index out of range: " + entry, line_no);
      }
      continue;
    }
    const auto it = std::find(ds.column_names.begin(), ds.column_names.end(), entry);
    if (it != ds.column_names.end()) {
      out.push_back(ds.column_map[static_cast<std::size_t>(it - ds.column_names.begin())]);
    } else if (unresolved) {
      unresolved->push_back(entry);
    } else {
      throw ParseError("unknown column name '" + entry + "'", line_no);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RealRunReport cmd_real(const ExperimentConfig& config, const std::string& dataset_path,
                       const std::string& out_dir) {
  RealRunReport report;
  const Dataset ds =
      load_binary_design_csv(dataset_path, config.min_occurrence, config.response_column);
  report.rows = ds.rows();
  report.features = ds.cols();
  const Partition part = partition_rows(ds, config.clients, stream_seed(config.seed, kPartitionStream));

  ProtocolConfig pc = config.protocol(config.seed);
  pc.sigma.reset();
  pc.top_k = std::min(pc.top_k, ds.cols());
  pc.jobs = config.jobs;
  ProtocolResult result = run_protocol(part, pc);
  for (std::size_t j : result.consensus.selected) report.selected.push_back(ds.column_map[j]);
  report.protocol_bits = result.ledger.total_bits();
  report.protocol_rounds = result.fedavg ? result.fedavg->state.round : 0;

  std::optional<FedAvgResult> baseline;
  if (config.fedavg_baseline) {
    FedAvgOptions opts = pc.fedavg;
    opts.jobs = config.jobs;
    baseline = run_fedavg(part, {}, opts);
    report.baseline_bits = baseline->ledger.total_bits();
    report.baseline_rounds = baseline->state.round;
  }

  if (config.truth_path.empty()) {
    report.warnings.push_back("no truth list configured; reporting selection only");
  } else if (!fs::exists(config.truth_path)) {
    report.warnings.push_back("truth list " + config.truth_path +
                              " not found; reporting selection only");
  } else {
    std::vector<std::string> unresolved;
    const IndexSet truth = load_truth_list(config.truth_path, ds, &unresolved);
    for (const auto& name : unresolved)
      report.warnings.push_back("truth entry '" + name + "' is not a retained column");
    // Score in the retained-column space; truth columns that were filtered
    // out occupy extra slots so they count as misses.
    IndexSet support;
    std::size_t misses = unresolved.size();
    for (std::size_t orig : truth) {
      const auto it = std::find(ds.column_map.begin(), ds.column_map.end(), orig);
      if (it != ds.column_map.end())
        support.push_back(static_cast<std::size_t>(it - ds.column_map.begin()));
      else
        ++misses;
    }
    for (std::size_t k = 0; k < misses; ++k) support.push_back(ds.cols() + k);
    const std::size_t extra = misses;
    report.metrics = score_selection(result.consensus.selected, support, ds.cols() + extra);
  }

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  json prov = provenance(config, "real");
  prov["dataset"] = dataset_path;

  {
    auto os = detail::open_output(dir / "real_selection.csv");
    write_provenance(os, prov);
    os << "column_index,column_name,votes\n";
    for (std::size_t j : result.consensus.selected)
      os << ds.column_map[j] << ',' << (ds.column_names.empty() ? "" : ds.column_names[j]) << ','
         << result.consensus.votes[j] << '\n';
    if (!os) throw IoError("failed writing real_selection.csv");
  }
  write_ledger(dir / "ledger.csv", result.ledger, prov);
  if (baseline) write_ledger(dir / "baseline_ledger.csv", baseline->ledger, prov);

  json doc = {{"provenance", prov},
              {"rows", report.rows},
              {"features", report.features},
              {"selected", report.selected},
              {"protocol_bits", report.protocol_bits},
              {"protocol_rounds", report.protocol_rounds},
              {"warnings", report.warnings}};
  if (baseline) {
    doc["baseline_bits"] = report.baseline_bits;
    doc["baseline_rounds"] = report.baseline_rounds;
    doc["cost_ratio"] = static_cast<double>(report.baseline_bits) /
                        static_cast<double>(std::max<std::uint64_t>(1, report.protocol_bits));
  }
  if (report.metrics) {
    const auto& m = *report.metrics;
    doc["metrics"] = {{"tp", m.tp},           {"fp", m.fp},
                      {"fn", m.fn},           {"fdp", m.fdp},
                      {"power", m.recall_power}, {"precision", m.precision},
                      {"f_measure", m.f_measure}};
  }
  write_json(dir / "real_summary.json", doc);
  return report;
}

}  // namespace fedsel
