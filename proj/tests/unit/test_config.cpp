#include <gtest/gtest.h>

#include "fedsel/config.hpp"
#include "fedsel/error.hpp"
#include "json.hpp"

using namespace fedsel;

namespace {

std::string path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST(Config, DefaultsResolve) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.p, 100u);
  EXPECT_EQ(c.top_k, 25u);
  EXPECT_EQ(c.clients, 10u);
  EXPECT_EQ(c.n_total(), 200u);
  EXPECT_EQ(c.replicates, 20u);
  EXPECT_EQ(c.K, 2.0);
}

TEST(Config, TopKScalesWithP) {
  EXPECT_EQ(parse_config(R"({"model":{"p":40,"s0":2}})").top_k, 10u);
  EXPECT_EQ(parse_config(R"({"model":{"p":3,"s0":1}})").top_k, 1u);
  EXPECT_EQ(parse_config(R"({"model":{"p":40,"s0":2},"selection":{"k":7}})").top_k, 7u);
}

TEST(Config, FullDocument) {
  const auto c = parse_config(R"({
    "model": {"p": 3, "s0": 1, "beta": 0.2, "sigma": 0.5,
              "covariance": [[1, 0.2, 0], [0.2, 1, 0], [0, 0, 1]]},
    "network": {"clients": 4, "n_local": 30},
    "selection": {"mode": "interval", "epsilon": 0.1, "delta": 0.2},
    "lambda": {"mode": "theory", "k": 9},
    "debias": {"m_mode": "known_covariance", "sigma_source": "estimated"},
    "fedavg": {"enabled": true, "mu": 0.001, "local_steps": 2, "max_rounds": 50, "tol": 1e-6},
    "constants": {"c_r": 2, "K": 3, "f_bits": 64},
    "bounds": {"tau_min": 0.01, "tau_max": 0.2, "points": 5},
    "sweep": {"axis": "tau", "grid": [0.01, 0.02]},
    "real": {"min_occurrence": 2, "response_column": "y", "truth_path": "t.txt"},
    "seed": 18446744073709551615, "replicates": 3, "jobs": 2, "output_dir": "x"
  })");
  EXPECT_TRUE(c.covariance.has_value());
  EXPECT_EQ(c.selection, SelectionMode::Interval);
  EXPECT_EQ(c.lambda_mode, LambdaMode::Theory);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  const auto pc = c.protocol(5);
  EXPECT_FALSE(pc.sigma.has_value());
  EXPECT_EQ(pc.seed, 5u);
  EXPECT_EQ(pc.fedavg.local_steps, 2u);
  EXPECT_EQ(*pc.fedavg.mu, 0.001);
  EXPECT_FALSE(pc.covariance.is_identity());

  // to_json echoes a document that parses back to the same resolution.
  const auto again = parse_config(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Config, KnownSigmaPassesThrough) {
  const auto pc = parse_config(R"({"model":{"sigma":0.3}})").protocol(1);
  ASSERT_TRUE(pc.sigma.has_value());
  EXPECT_EQ(*pc.sigma, 0.3);
  EXPECT_EQ(*pc.s0, 5u);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(path_of("{"), "");
  EXPECT_EQ(path_of("[]"), "");
  EXPECT_EQ(path_of(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(path_of(R"({"network": {"clients": 0}})"), "network.clients");
  EXPECT_EQ(path_of(R"({"network": {"clients": -3}})"), "network.clients");
  EXPECT_EQ(path_of(R"({"network": {"clients": 2.5}})"), "network.clients");
  EXPECT_EQ(path_of(R"({"network": {"nodes": 2}})"), "network.nodes");
  EXPECT_EQ(path_of(R"({"model": {"s0": 100}})"), "model.s0");
  EXPECT_EQ(path_of(R"({"model": {"beta": "x"}})"), "model.beta");
  EXPECT_EQ(path_of(R"({"model": {"covariance": [[1, 2], [2, 1]]}})"), "model.covariance");
  EXPECT_EQ(path_of(R"({"model": {"covariance": "banded"}})"), "model.covariance");
  EXPECT_EQ(path_of(R"({"selection": {"mode": "best"}})"), "selection.mode");
  EXPECT_EQ(path_of(R"({"selection": {"mode": "threshold"}})"), "selection.tau");
  EXPECT_EQ(path_of(R"({"selection": {"k": 101}})"), "selection.k");
  EXPECT_EQ(path_of(R"({"lambda": {"k": 2}})"), "lambda.k");
  EXPECT_EQ(path_of(R"({"lambda": {"folds": 30}})"), "lambda.folds");
  EXPECT_EQ(path_of(R"({"fedavg": {"enabled": 1}})"), "fedavg.enabled");
  EXPECT_EQ(path_of(R"({"constants": {"f_bits": 0}})"), "constants.f_bits");
  EXPECT_EQ(path_of(R"({"sweep": {"axis": "N", "grid": [2, 2.5]}})"), "sweep.grid[1]");
  EXPECT_EQ(path_of(R"({"sweep": {"axis": "p"}})"), "sweep.axis");
  EXPECT_EQ(path_of(R"({"replicates": 0})"), "replicates");
  EXPECT_EQ(path_of(R"({"seed": 1.5})"), "seed");
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}
