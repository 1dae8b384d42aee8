#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mnlx/cli.hpp"
#include "mnlx/serialize.hpp"
#include "oracles.hpp"

using namespace mnlx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("named instances") {
  Instance i2 = make_instance_I(2, 0.02);
  REQUIRE(i2.incumbents.size() == 2);
  CHECK(i2.incumbents[0].weight == 0.9);
  CHECK(i2.incumbents[1].weight == Catch::Approx(0.04));
  CHECK(i2.num_entrants() == 2);
  CHECK(i2.groups[0].spec.support == std::vector<std::pair<double, double>>{{0.0, 0.98},
                                                                            {1.0, 0.02}});
  CHECK_THROWS_AS(make_instance_I(3, 0.1), std::invalid_argument);

  Instance j = make_instance_J(64, 2, 0.125, 0.125);
  CHECK(j.num_entrants() == 64);
  REQUIRE(j.incumbents.size() == 2);
  CHECK(j.incumbents[0].weight == 0.25);
  CHECK(j.incumbents[1].weight == 0.25);
  CHECK_THROWS_AS(make_instance_J(4, 2, 0.5, 0.6), std::invalid_argument);
}

TEST_CASE("instance JSON round-trips") {
  KeyedRng rng(149);
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst = trial % 2 == 0 ? testing::random_unit_instance(rng)
                                   : testing::random_hetero_reward_instance(rng);
    const json j = to_json(inst);
    CHECK(instance_from_json(j) == inst);
  }
  // quantile and fixed mappings survive the trip
  PriorSpec prior;
  prior.support = {{0.0, 0.9}, {1.0, 0.1}};
  prior.h = HStatistic::quantile(0.99);
  Instance inst(1, 1.0, {{0.5, 1.0}}, {prior}, 1.0);
  CHECK(instance_from_json(to_json(inst)) == inst);
}

TEST_CASE("policy JSON round-trips") {
  const std::vector<PolicyKind> policies = {
      EfaPolicy{},
      HefaPolicy{},
      ExploreAllPolicy{},
      ExploreOnePolicy{},
      UcbPolicy{UcbSchedule::constant(0.7)},
      UcbPolicy{UcbSchedule::table({0.1, 0.5, 1.0})},
      UcbPolicy{UcbSchedule::affine_clamp(0.2, 0.001)},
      TsPolicy{},
      FixedSetPolicy{{0, 2}},
      HeteroPriorPolicy{{1, 2}},
      NoisyTopKPolicy{}};
  for (const PolicyKind& p : policies) CHECK(policy_from_json(to_json(p)) == p);
  CHECK_THROWS_AS(policy_from_json(json{{"policy", "mystery"}}), std::invalid_argument);
}

TEST_CASE("config JSON round-trips and resolves named instances") {
  json j = {{"instance", {{"name", "I"}, {"c", 2}, {"q", 0.02}}},
            {"policies", json::array({{{"policy", "efa"}}, {{"policy", "ts"}}})},
            {"mode", "simulate"},
            {"reps", 500},
            {"master_seed", 7},
            {"horizon_cap", 100000},
            {"out", "x.csv"},
            {"threads", 2}};
  ExperimentConfig cfg = config_from_json(j);
  CHECK(cfg.instance_id == "I(c=2;q=0.02)");
  CHECK(cfg.instance == make_instance_I(2, 0.02));
  CHECK(cfg.policies.size() == 2);
  CHECK(config_from_json(to_json(cfg)) == cfg);
}

TEST_CASE("cmd_example validates the worked numbers and flags perturbations") {
  std::ostringstream quiet;
  CHECK(cmd_example(1.0, quiet) == 0);
  CHECK(cmd_example(1.1, quiet) == 1);
}

TEST_CASE("cmd_run writes deterministic artifacts") {
  ExperimentConfig cfg;
  cfg.instance = make_instance_I(2, 0.1);
  cfg.instance_id = "I(c=2;q=0.1)";
  cfg.policies = {PolicyKind{EfaPolicy{}}, PolicyKind{TsPolicy{}}};
  cfg.mode = RunMode::Simulate;
  cfg.reps = 200;
  cfg.master_seed = 7;
  cfg.horizon_cap = 100000;
  cfg.out = "test_run_a.csv";
  std::ostringstream quiet;
  REQUIRE(cmd_run(cfg, /*fixed_timing=*/true, quiet) == 0);
  const std::string first = slurp(cfg.out);
  cfg.out = "test_run_b.csv";
  REQUIRE(cmd_run(cfg, /*fixed_timing=*/true, quiet) == 0);
  const std::string second = slurp(cfg.out);
  CHECK(first == second);
  CHECK(first.find(kCsvHeader) == 0);

  // sidecar re-parses to an equal config (modulo the out path)
  json sidecar = json::parse(slurp("test_run_b.csv.json"));
  ExperimentConfig echoed = config_from_json(sidecar);
  CHECK(echoed == cfg);
  std::remove("test_run_a.csv");
  std::remove("test_run_b.csv");
  std::remove("test_run_a.csv.json");
  std::remove("test_run_b.csv.json");
}

TEST_CASE("cmd_run answers the canned exact comparison") {
  ExperimentConfig cfg;
  cfg.instance = make_instance_I(2, 0.02);
  cfg.instance_id = "I(c=2;q=0.02)";
  cfg.policies = {PolicyKind{ExploreAllPolicy{}}, PolicyKind{EfaPolicy{}}};
  cfg.mode = RunMode::Exact;
  cfg.out = "test_run_exact.csv";
  std::ostringstream quiet;
  REQUIRE(cmd_run(cfg, true, quiet) == 0);
  std::ifstream in(cfg.out);
  std::string line;
  std::getline(in, line);  // header
  double explore_all = 0.0, efa = 0.0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 8);
    if (fields[1] == "explore_all") explore_all = std::stod(fields[4]);
    if (fields[1] == "efa") efa = std::stod(fields[4]);
    CHECK(fields[2] == "0");  // exact rows carry reps = 0
  }
  CHECK(explore_all >= 6.758);
  CHECK(efa <= 24.0);
  std::remove("test_run_exact.csv");
  std::remove("test_run_exact.csv.json");
}

TEST_CASE("cmd_run rejects exact mode for round-indexed policies") {
  ExperimentConfig cfg;
  cfg.instance = make_instance_I(2, 0.1);
  cfg.policies = {PolicyKind{TsPolicy{}}};
  cfg.mode = RunMode::Exact;
  cfg.out = "test_run_bad.csv";
  std::ostringstream quiet;
  CHECK(cmd_run(cfg, true, quiet) == 2);
}

TEST_CASE("episode and estimate JSON shapes") {
  Instance inst = make_instance_I(2, 0.3);
  EpisodeLog log = run_episode(inst, PolicyKind{EfaPolicy{}}, 1, 2);
  json j = to_json(log);
  CHECK(j.contains("rounds"));
  CHECK(j.contains("total_regret"));
  CHECK(j.contains("purchases"));
  CHECK(j.contains("diverged"));
  RegretEstimate est = estimate_regret(inst, PolicyKind{EfaPolicy{}}, 50, 1);
  json je = to_json(est);
  CHECK(je.at("reps") == 50);
  CHECK(je.contains("stderr"));
}
