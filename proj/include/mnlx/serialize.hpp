#pragma once
// JSON serialization for instances, policies, experiment configs, and
// simulator outputs; CSV helpers for batch runs. Field names are part of the
// external contract.

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mnlx/core.hpp"
#include "mnlx/instances.hpp"
#include "mnlx/policies.hpp"
#include "mnlx/simulate.hpp"

namespace mnlx {

using json = nlohmann::json;

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline json to_json(const HStatistic& h) {
  switch (h.kind) {
    case HStatistic::Kind::Mean: return json{{"type", "mean"}};
    case HStatistic::Kind::Quantile: return json{{"type", "quantile"}, {"value", h.value}};
    case HStatistic::Kind::Fixed: return json{{"type", "fixed"}, {"value", h.value}};
  }
  return {};
}

inline HStatistic h_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "mean") return HStatistic::mean();
  if (type == "quantile") return HStatistic::quantile(j.at("value").get<double>());
  if (type == "fixed") return HStatistic::fixed(j.at("value").get<double>());
  throw std::invalid_argument("unknown h type: " + type);
}

inline json to_json(const PriorSpec& prior) {
  json support = json::array();
  for (const auto& [v, p] : prior.support) support.push_back(json::array({v, p}));
  return json{{"support", support}, {"h", to_json(prior.h)}};
}

inline PriorSpec prior_from_json(const json& j) {
  PriorSpec spec;
  for (const auto& atom : j.at("support"))
    spec.support.push_back({atom.at(0).get<double>(), atom.at(1).get<double>()});
  spec.h = h_from_json(j.at("h"));
  spec.validate();
  return spec;
}

inline json to_json(const Instance& inst) {
  json incumbents = json::array();
  for (const auto& p : inst.incumbents)
    incumbents.push_back(json{{"weight", p.weight}, {"reward", p.reward}});
  json entrants = json::array();
  for (const auto& prior : inst.entrant_priors) entrants.push_back(to_json(prior));
  return json{{"capacity", inst.capacity},
              {"outside_weight", inst.outside_weight},
              {"incumbents", incumbents},
              {"entrants", entrants},
              {"entrant_reward", inst.entrant_reward}};
}

inline Instance instance_from_json(const json& j) {
  std::vector<ProductEntry> incumbents;
  for (const auto& p : j.at("incumbents"))
    incumbents.push_back({p.at("weight").get<double>(), p.at("reward").get<double>()});
  std::vector<PriorSpec> priors;
  for (const auto& e : j.at("entrants")) priors.push_back(prior_from_json(e));
  return Instance(j.at("capacity").get<int>(), j.at("outside_weight").get<double>(),
                  std::move(incumbents), std::move(priors),
                  j.at("entrant_reward").get<double>());
}

// Named-instance specs: {"name": "I", "c": .., "q": ..}, {"name": "J", ...},
// {"name": "bernoulli_like", ...}. Anything with a "capacity" field parses as
// a full instance.
inline std::pair<Instance, std::string> instance_or_named_from_json(const json& j) {
  if (j.contains("capacity")) return {instance_from_json(j), "custom"};
  const std::string name = j.at("name").get<std::string>();
  if (name == "I") {
    const int c = j.at("c").get<int>();
    const double q = j.at("q").get<double>();
    std::ostringstream args;
    args << "c=" << c << ";q=" << format_number(q);
    return {make_instance_I(c, q), format_instance_id("I", args.str())};
  }
  if (name == "J") {
    const int m = j.at("m").get<int>();
    const int c = j.at("c").get<int>();
    const double q = j.at("q").get<double>();
    const double delta = j.at("delta").get<double>();
    std::ostringstream args;
    args << "m=" << m << ";c=" << c << ";q=" << format_number(q)
         << ";delta=" << format_number(delta);
    return {make_instance_J(m, c, q, delta), format_instance_id("J", args.str())};
  }
  if (name == "bernoulli_like") {
    const double mu = j.at("mu").get<double>();
    const double p1 = j.at("p1").get<double>();
    const double p2 = j.at("p2").get<double>();
    const double w3 = j.at("w3").get<double>();
    const double w4 = j.at("w4").get<double>();
    std::ostringstream args;
    args << "mu=" << format_number(mu) << ";p1=" << format_number(p1)
         << ";p2=" << format_number(p2) << ";w3=" << format_number(w3)
         << ";w4=" << format_number(w4);
    return {make_bernoulli_like(mu, p1, p2, w3, w4),
            format_instance_id("bernoulli_like", args.str())};
  }
  throw std::invalid_argument("unknown named instance: " + name);
}

inline json to_json(const UcbSchedule& s) {
  switch (s.kind) {
    case UcbSchedule::Kind::Constant: return json{{"type", "constant"}, {"p", s.p}};
    case UcbSchedule::Kind::Table: return json{{"type", "table"}, {"values", s.values}};
    case UcbSchedule::Kind::AffineClamp:
      return json{{"type", "affine_clamp"}, {"a", s.a}, {"b", s.b}};
  }
  return {};
}

inline UcbSchedule schedule_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return UcbSchedule::constant(j.at("p").get<double>());
  if (type == "table") return UcbSchedule::table(j.at("values").get<std::vector<double>>());
  if (type == "affine_clamp")
    return UcbSchedule::affine_clamp(j.at("a").get<double>(), j.at("b").get<double>());
  throw std::invalid_argument("unknown ucb schedule type: " + type);
}

inline json to_json(const PolicyKind& kind) {
  json j{{"policy", policy_name(kind)}};
  if (const auto* ucb = std::get_if<UcbPolicy>(&kind)) j["schedule"] = to_json(ucb->schedule);
  if (const auto* fs = std::get_if<FixedSetPolicy>(&kind)) j["known_ids"] = fs->known_ids;
  if (const auto* hp = std::get_if<HeteroPriorPolicy>(&kind)) j["subset"] = hp->subset;
  return j;
}

inline PolicyKind policy_from_json(const json& j) {
  const std::string name = j.at("policy").get<std::string>();
  if (name == "efa") return EfaPolicy{};
  if (name == "hefa") return HefaPolicy{};
  if (name == "explore_all") return ExploreAllPolicy{};
  if (name == "explore_one") return ExploreOnePolicy{};
  if (name == "ucb") return UcbPolicy{schedule_from_json(j.at("schedule"))};
  if (name == "ts") return TsPolicy{};
  if (name == "fixed_set") return FixedSetPolicy{j.at("known_ids").get<std::vector<int>>()};
  if (name == "hetero_prior") return HeteroPriorPolicy{j.at("subset").get<std::vector<int>>()};
  if (name == "noisy_topk") return NoisyTopKPolicy{};
  throw std::invalid_argument("unknown policy: " + name);
}

inline json to_json(const EpisodeLog& log) {
  json purchases = json::array();
  for (const auto& [round, w] : log.purchases) purchases.push_back(json::array({round, w}));
  return json{{"rounds", log.rounds},
              {"total_regret", log.total_regret},
              {"purchases", purchases},
              {"diverged", log.diverged}};
}

inline json to_json(const RegretEstimate& est) {
  return json{{"mean", est.mean},
              {"stderr", est.std_error},
              {"reps", est.reps},
              {"diverged_count", est.diverged_count}};
}

enum class RunMode { Exact, Simulate, Both };

inline std::string run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::Exact: return "exact";
    case RunMode::Simulate: return "simulate";
    case RunMode::Both: return "both";
  }
  return "?";
}

inline RunMode run_mode_from_string(const std::string& s) {
  if (s == "exact") return RunMode::Exact;
  if (s == "simulate") return RunMode::Simulate;
  if (s == "both") return RunMode::Both;
  throw std::invalid_argument("mode must be exact, simulate, or both");
}

struct ExperimentConfig {
  Instance instance;
  std::string instance_id = "custom";
  std::vector<PolicyKind> policies;
  RunMode mode = RunMode::Simulate;
  long reps = 10000;
  std::uint64_t master_seed = 0;
  long horizon_cap = kDefaultHorizonCap;
  std::string out = "run.csv";
  int threads = 1;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.instance == b.instance && a.instance_id == b.instance_id &&
           a.policies == b.policies && a.mode == b.mode && a.reps == b.reps &&
           a.master_seed == b.master_seed && a.horizon_cap == b.horizon_cap && a.out == b.out &&
           a.threads == b.threads;
  }
};

inline json to_json(const ExperimentConfig& cfg) {
  json policies = json::array();
  for (const auto& p : cfg.policies) policies.push_back(to_json(p));
  return json{{"instance", to_json(cfg.instance)},
              {"instance_id", cfg.instance_id},
              {"policies", policies},
              {"mode", run_mode_name(cfg.mode)},
              {"reps", cfg.reps},
              {"master_seed", cfg.master_seed},
              {"horizon_cap", cfg.horizon_cap},
              {"out", cfg.out},
              {"threads", cfg.threads}};
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  auto [inst, id] = instance_or_named_from_json(j.at("instance"));
  cfg.instance = std::move(inst);
  cfg.instance_id = j.value("instance_id", id);
  for (const auto& p : j.at("policies")) cfg.policies.push_back(policy_from_json(p));
  cfg.mode = run_mode_from_string(j.value("mode", std::string("simulate")));
  cfg.reps = j.value("reps", 10000L);
  cfg.master_seed = j.value("master_seed", static_cast<std::uint64_t>(0));
  cfg.horizon_cap = j.value("horizon_cap", kDefaultHorizonCap);
  cfg.out = j.value("out", std::string("run.csv"));
  cfg.threads = j.value("threads", 1);
  return cfg;
}

inline const char* kCsvHeader = "instance_id,policy,reps,seed,mean,stderr,diverged_count,wall_ms";

struct CsvRow {
  std::string instance_id;
  std::string policy;
  long reps = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std_error = 0.0;
  long diverged_count = 0;
  long wall_ms = 0;

  std::string line() const {
    std::ostringstream os;
    os << instance_id << "," << policy << "," << reps << "," << seed << ","
       << format_number(mean) << "," << format_number(std_error) << "," << diverged_count << ","
       << wall_ms;
    return os.str();
  }
};

}  // namespace mnlx
