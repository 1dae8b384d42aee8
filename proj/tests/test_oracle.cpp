#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mnlx/instances.hpp"
#include "mnlx/oracle.hpp"
#include "oracles.hpp"

using namespace mnlx;

namespace {

// All incumbent subsets of size <= c-1, as id lists.
std::vector<std::vector<int>> incumbent_subsets(const Instance& inst) {
  const int n = static_cast<int>(inst.incumbents.size());
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> ids;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) ids.push_back(i);
    if (static_cast<int>(ids.size()) <= inst.capacity - 1) out.push_back(ids);
  }
  return out;
}

}  // namespace

TEST_CASE("terminal initial states have zero value") {
  PriorSpec low;
  low.support = {{0.1, 0.5}, {0.2, 0.5}};
  low.h = HStatistic::mean();
  Instance inst(2, 1.0, {{0.9, 1.0}, {0.8, 1.0}}, {low}, 1.0);
  CHECK(exact_policy_regret(inst, PolicyKind{ExploreOnePolicy{}}) == 0.0);
  CHECK(optimal_value(inst) == 0.0);
}

TEST_CASE("overexploration is expensive on I(2, 0.02)") {
  Instance inst = make_instance_I(2, 0.02);
  const double explore_all = exact_policy_regret(inst, PolicyKind{ExploreAllPolicy{}});
  CHECK(explore_all >= (1.0 / 0.02) * (9.0 / 58.0) - 1.0);
  const double efa = exact_policy_regret(inst, PolicyKind{EfaPolicy{}});
  CHECK(efa <= 24.0);
  CHECK(efa <= explore_all);
}

TEST_CASE("the oracle rejects round-indexed policies") {
  Instance inst = make_instance_I(2, 0.1);
  CHECK_THROWS_AS(exact_policy_regret(inst, PolicyKind{TsPolicy{}}), std::invalid_argument);
  CHECK_THROWS_AS(
      exact_policy_regret(inst, PolicyKind{UcbPolicy{UcbSchedule::constant(0.5)}}),
      std::invalid_argument);
}

TEST_CASE("the oracle rejects oversized state spaces") {
  PriorSpec wide;
  wide.support.clear();
  double total = 0.0;
  for (int i = 0; i < 12; ++i) {
    wide.support.push_back({0.1 * (i + 1), 1.0 / 12});
    total += 1.0 / 12;
  }
  wide.support.back().second += 1.0 - total;
  wide.h = HStatistic::mean();
  Instance inst(2, 1.0, {{0.5, 1.0}, {0.4, 1.0}},
                std::vector<PriorSpec>(12, wide), 1.0);
  CHECK_THROWS_AS(exact_policy_regret(inst, PolicyKind{ExploreOnePolicy{}}),
                  std::invalid_argument);
}

TEST_CASE("efa attains the optimal value on unit-reward instances") {
  KeyedRng rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 3, 2);
    const double efa = exact_policy_regret(inst, PolicyKind{EfaPolicy{}});
    const double opt = optimal_value(inst);
    CHECK(efa == Catch::Approx(opt).margin(1e-12));
    CHECK(exact_policy_regret(inst, PolicyKind{ExploreOnePolicy{}}) >= opt - 1e-12);
    CHECK(exact_policy_regret(inst, PolicyKind{ExploreAllPolicy{}}) >= opt - 1e-12);
  }
}

TEST_CASE("single-entrant optimum is attained by the top fixed set") {
  KeyedRng rng(109);
  int checked = 0;
  while (checked < 20) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 1, 2);
    if (is_terminal(MarketState::initial(inst), inst)) continue;
    const double opt = optimal_value(inst);
    double best = std::numeric_limits<double>::infinity();
    double best_weight = -1.0;
    for (const auto& ids : incumbent_subsets(inst)) {
      const double value = exact_policy_regret(inst, PolicyKind{FixedSetPolicy{ids}});
      double weight = 0.0;
      for (int id : ids) weight += inst.incumbents[id].weight;
      if (value < best) {
        best = value;
        best_weight = weight;
      }
    }
    CHECK(best == Catch::Approx(opt).margin(1e-10));
    // the winner carries the maximal total weight
    double top = 0.0;
    std::vector<double> weights;
    for (const auto& p : inst.incumbents) weights.push_back(p.weight);
    std::sort(weights.begin(), weights.end(), std::greater<>());
    for (int i = 0; i < inst.capacity - 1; ++i) top += weights[i];
    CHECK(best_weight == Catch::Approx(top).margin(1e-12));
    ++checked;
  }
}

TEST_CASE("recursion consistency at the root") {
  KeyedRng rng(113);
  int checked = 0;
  while (checked < 20) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 2, 2);
    MarketState state = MarketState::initial(inst);
    const StateSummary s = summarize(state, inst);
    if (s.terminal) continue;
    const EpochPolicy policy = to_epoch_policy(PolicyKind{ExploreOnePolicy{}});
    AssortmentPlan plan = policy(state, inst);
    double expected = epoch_regret_given(plan, state, inst, s.opt_t);
    const double u_total = plan_unknown_weight(plan, inst);
    for (std::size_t g = 0; g < inst.groups.size(); ++g) {
      if (plan.unknown_counts[g] == 0) continue;
      const double pg = plan.unknown_counts[g] * inst.groups[g].h / u_total;
      for (const auto& [v, pv] : inst.groups[g].spec.support) {
        MarketState child = state.after_reveal(static_cast<int>(g), v, inst);
        expected += pg * pv * exact_policy_regret(inst, policy, child);
      }
    }
    CHECK(exact_policy_regret(inst, policy) == Catch::Approx(expected).margin(1e-12));
    ++checked;
  }
}

TEST_CASE("oracle values respect the universal bounds") {
  KeyedRng rng(127);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 3, 2);
    const double efa = exact_policy_regret(inst, PolicyKind{EfaPolicy{}});
    const int m = inst.num_entrants();
    CHECK(efa >= -static_cast<double>(m) - 1e-12);
    CHECK(efa <= static_cast<double>(m) / inst.groups[0].h + 1e-12);
  }
}

TEST_CASE("fixed-set regret strictly decreases in the paired weight") {
  KeyedRng rng(131);
  int checked = 0;
  while (checked < 15) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 1, 2);
    if (is_terminal(MarketState::initial(inst), inst)) continue;
    std::vector<std::pair<double, double>> by_weight;  // (sum weight, regret)
    for (const auto& ids : incumbent_subsets(inst)) {
      double weight = 0.0;
      for (int id : ids) weight += inst.incumbents[id].weight;
      by_weight.push_back(
          {weight, exact_policy_regret(inst, PolicyKind{FixedSetPolicy{ids}})});
    }
    std::sort(by_weight.begin(), by_weight.end());
    for (std::size_t i = 1; i < by_weight.size(); ++i) {
      if (by_weight[i].first > by_weight[i - 1].first + 1e-12)
        CHECK(by_weight[i].second < by_weight[i - 1].second);
    }
    ++checked;
  }
}

TEST_CASE("explore_one stays within a factor c of efa when incumbents beat h") {
  KeyedRng rng(137);
  int checked = 0;
  while (checked < 20) {
    Instance inst = testing::random_unit_instance(rng, 3, 2, 3, 2);
    std::vector<double> weights;
    for (const auto& p : inst.incumbents) weights.push_back(p.weight);
    std::sort(weights.begin(), weights.end(), std::greater<>());
    if (!(weights[inst.capacity - 1] > inst.groups[0].h)) continue;
    const double efa = exact_policy_regret(inst, PolicyKind{EfaPolicy{}});
    const double eo = exact_policy_regret(inst, PolicyKind{ExploreOnePolicy{}});
    if (efa <= 1e-12) continue;
    CHECK(eo <= inst.capacity * efa + 1e-9);
    ++checked;
  }
}

TEST_CASE("hefa attains the optimal value under heterogeneous rewards") {
  KeyedRng rng(139);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = testing::random_hetero_reward_instance(rng, 3, 2);
    const double hefa = exact_policy_regret(inst, PolicyKind{HefaPolicy{}});
    const double opt = optimal_value(inst);
    CHECK(hefa == Catch::Approx(opt).margin(1e-12));
  }
}
