#pragma once
// Single-entrant noisy-review model: a Beta prior over the entrant's
// attraction parameter, Bernoulli review feedback for the first k-1
// purchases, and exact revelation at the k-th.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "mnlx/core.hpp"
#include "mnlx/rng.hpp"
#include "mnlx/simulate.hpp"

namespace mnlx {

struct NoisyInstance {
  int capacity = 1;
  double outside_weight = 1.0;
  std::vector<double> incumbent_weights;
  double beta_a = 1.0;
  double beta_b = 1.0;
  int review_budget = 1;  // k: the k-th purchase reveals the weight exactly

  void validate() const {
    if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
    if (!(outside_weight > 0.0)) throw std::invalid_argument("outside weight must be positive");
    if (static_cast<int>(incumbent_weights.size()) < capacity)
      throw std::invalid_argument("need at least c incumbents");
    if (!(beta_a > 0.0) || !(beta_b > 0.0))
      throw std::invalid_argument("Beta shape parameters must be positive");
    if (review_budget < 1) throw std::invalid_argument("review budget k must be at least 1");
  }

  // Incumbent indices in attractiveness order.
  std::vector<int> attractiveness_order() const {
    std::vector<int> idx(incumbent_weights.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return incumbent_weights[a] > incumbent_weights[b]; });
    return idx;
  }
};

struct NoisyReviewState {
  int ones = 0;
  int zeros = 0;
  std::optional<double> realized_weight;
  int budget = 1;

  int review_count() const { return ones + zeros + (realized_weight ? 1 : 0); }

  void validate() const {
    if (review_count() > budget) throw std::invalid_argument("review counts exceed budget k");
    if (realized_weight.has_value() != (review_count() >= budget))
      throw std::invalid_argument("weight realized iff k reviews obtained");
  }

  // Customer weight for the entrant: mean of the Beta posterior before
  // realization, the exact weight after.
  double entrant_weight(const NoisyInstance& inst) const {
    if (realized_weight) return *realized_weight;
    return (inst.beta_a + ones) / (inst.beta_a + inst.beta_b + ones + zeros);
  }
};

struct NoisyPlan {
  bool entrant = false;
  std::vector<int> incumbent_ids;
  friend bool operator==(const NoisyPlan&, const NoisyPlan&) = default;
};

// Top-pairing policy: the entrant with the c-1 most attractive incumbents until
// the k-th review, the c most attractive products afterwards.
inline NoisyPlan noisy_topk_decide(const NoisyReviewState& state, const NoisyInstance& inst) {
  const std::vector<int> order = inst.attractiveness_order();
  NoisyPlan plan;
  if (!state.realized_weight) {
    plan.entrant = true;
    for (int k = 0; k < inst.capacity - 1 && k < static_cast<int>(order.size()); ++k)
      plan.incumbent_ids.push_back(order[k]);
    return plan;
  }
  const double w1 = *state.realized_weight;
  int slots = inst.capacity;
  for (int k = 0; k < static_cast<int>(order.size()) && slots > 0; ++k) {
    if (!plan.entrant && w1 >= inst.incumbent_weights[order[k]]) {
      plan.entrant = true;  // entrant outranks the rest of the incumbent tail
      if (--slots == 0) break;
    }
    plan.incumbent_ids.push_back(order[k]);
    --slots;
  }
  if (!plan.entrant && slots > 0) plan.entrant = true;
  return plan;
}

inline double noisy_plan_revenue(const NoisyPlan& plan, const NoisyReviewState& state,
                                 const NoisyInstance& inst) {
  double w = 0.0;
  for (int id : plan.incumbent_ids) w += inst.incumbent_weights[id];
  if (plan.entrant) w += state.entrant_weight(inst);
  return w / (w + inst.outside_weight);
}

// Episode under a fixed exploration pairing: the entrant plus `explore_set`
// incumbents until the k-th review, top-c products afterwards. The
// top-pairing policy is explore_set = the c-1 most attractive incumbents.
inline EpisodeLog run_noisy_episode(const NoisyInstance& inst,
                                    const std::vector<int>& explore_set,
                                    std::uint64_t master_seed, std::uint64_t replication,
                                    long horizon_cap = kDefaultHorizonCap) {
  inst.validate();
  if (static_cast<int>(explore_set.size()) > inst.capacity - 1)
    throw std::invalid_argument("exploration pairing must leave room for the entrant");

  KeyedRng weight_rng(RngKey{master_seed, replication, 0,
                             static_cast<std::uint64_t>(DrawKind::NoisyWeight), 0});
  const double w1 = weight_rng.next_beta(inst.beta_a, inst.beta_b);

  // Ex-post optimum: top-c of {w1} and the incumbents, unit rewards.
  std::vector<double> all = inst.incumbent_weights;
  all.push_back(w1);
  std::sort(all.begin(), all.end(), std::greater<>());
  double top = 0.0;
  for (int k = 0; k < inst.capacity && k < static_cast<int>(all.size()); ++k) top += all[k];
  const double opt = top / (top + inst.outside_weight);

  NoisyReviewState state;
  state.budget = inst.review_budget;

  NoisyPlan plan;
  plan.entrant = true;
  plan.incumbent_ids = explore_set;

  EpisodeLog log;
  for (long t = 1;; ++t) {
    if (state.realized_weight) break;  // top-c thereafter; zero forward regret
    if (t > horizon_cap) {
      log.diverged = true;
      break;
    }
    const double entrant_w = state.entrant_weight(inst);
    double denom = entrant_w + inst.outside_weight;
    for (int id : plan.incumbent_ids) denom += inst.incumbent_weights[id];
    log.total_regret += opt - noisy_plan_revenue(plan, state, inst);
    ++log.rounds;

    const RngKey choice_key{master_seed, replication, static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(DrawKind::Choice), 0};
    double x = uniform_at(choice_key) * denom;
    bool entrant_chosen = false;
    x -= entrant_w;
    if (x < 0.0) {
      entrant_chosen = true;
    } else {
      for (int id : plan.incumbent_ids) {
        x -= inst.incumbent_weights[id];
        if (x < 0.0) break;  // incumbent purchase; no state change
      }
    }
    if (entrant_chosen) {
      const int n = state.ones + state.zeros;
      if (n <= inst.review_budget - 2) {
        const RngKey review_key{master_seed, replication, static_cast<std::uint64_t>(t),
                                static_cast<std::uint64_t>(DrawKind::Review), 0};
        if (uniform_at(review_key) < w1)
          ++state.ones;
        else
          ++state.zeros;
      } else {
        state.realized_weight = w1;
      }
      log.purchases.push_back({t, state.realized_weight ? w1 : state.entrant_weight(inst)});
      state.validate();
    }
  }
  return log;
}

// Diagnostic expected ex-post optimum under the current Beta posterior:
// Monte Carlo over 1e4 stratified draws with a fixed sub-seed.
inline double noisy_posterior_optimum(const NoisyInstance& inst, const NoisyReviewState& state,
                                      std::uint64_t sub_seed = 0) {
  if (state.realized_weight) {
    std::vector<double> all = inst.incumbent_weights;
    all.push_back(*state.realized_weight);
    std::sort(all.begin(), all.end(), std::greater<>());
    double top = 0.0;
    for (int k = 0; k < inst.capacity && k < static_cast<int>(all.size()); ++k) top += all[k];
    return top / (top + inst.outside_weight);
  }
  const double a = inst.beta_a + state.ones;
  const double b = inst.beta_b + state.zeros;
  std::vector<double> inc = inst.incumbent_weights;
  std::sort(inc.begin(), inc.end(), std::greater<>());
  const int n = 10000;
  KeyedRng jitter(RngKey{sub_seed, 0, 0, static_cast<std::uint64_t>(DrawKind::Generic), 0});
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + jitter.next_unit()) / n;
    const double w = boost::math::ibeta_inv(a, b, u);
    double top = 0.0;
    std::size_t ki = 0;
    bool used = false;
    for (int taken = 0; taken < inst.capacity; ++taken) {
      const bool inc_ok = ki < inc.size();
      if (!used && (!inc_ok || w >= inc[ki])) {
        top += w;
        used = true;
      } else if (inc_ok) {
        top += inc[ki++];
      } else {
        break;
      }
    }
    acc += top / (top + inst.outside_weight);
  }
  return acc / n;
}

}  // namespace mnlx
