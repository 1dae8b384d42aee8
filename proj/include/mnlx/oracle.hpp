#pragma once
// Exact expected infinite-horizon regret of an epoch-stationary policy on a
// finite-support-prior instance, by memoized recursion over condensed states:
// Reg(state) = EpochReg(plan; state) + E_w[Reg(state + w)], terminal states
// carrying zero forward regret. When the offered plan mixes prior groups, the
// purchased entrant's group is drawn proportionally to effective weights.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "mnlx/core.hpp"
#include "mnlx/epoch.hpp"
#include "mnlx/optimum.hpp"
#include "mnlx/policies.hpp"

namespace mnlx {

using EpochPolicy = std::function<AssortmentPlan(const MarketState&, const Instance&)>;

inline EpochPolicy to_epoch_policy(const PolicyKind& kind) {
  if (!epoch_stationary(kind))
    throw std::invalid_argument("exact oracle rejects non-epoch-stationary policies");
  struct Binder {
    EpochPolicy operator()(const EfaPolicy&) const {
      return [](const MarketState& s, const Instance& i) { return efa_decide(s, i); };
    }
    EpochPolicy operator()(const HefaPolicy&) const {
      return [](const MarketState& s, const Instance& i) { return hefa_decide(s, i); };
    }
    EpochPolicy operator()(const ExploreAllPolicy&) const {
      return [](const MarketState& s, const Instance& i) { return explore_all_decide(s, i); };
    }
    EpochPolicy operator()(const ExploreOnePolicy&) const {
      return [](const MarketState& s, const Instance& i) { return explore_one_decide(s, i); };
    }
    EpochPolicy operator()(const FixedSetPolicy& p) const {
      return [ids = p.known_ids](const MarketState& s, const Instance& i) {
        return fixed_set_decide(s, i, ids);
      };
    }
    EpochPolicy operator()(const HeteroPriorPolicy& p) const {
      return [sub = p.subset](const MarketState& s, const Instance& i) {
        return hetero_prior_decide(s, i, sub);
      };
    }
    EpochPolicy operator()(const UcbPolicy&) const { return {}; }
    EpochPolicy operator()(const TsPolicy&) const { return {}; }
    EpochPolicy operator()(const NoisyTopKPolicy&) const { return {}; }
  };
  return std::visit(Binder{}, kind);
}

namespace detail {

// Condensed DP state: per prior group, a count of revealed entrants per
// support atom. Remaining-unknown counts are implied.
using CondensedKey = std::vector<int>;

class RegretDp {
 public:
  explicit RegretDp(const Instance& inst) : inst_(inst) {
    double states = 1.0;
    offsets_.reserve(inst.groups.size());
    int off = 0;
    for (const auto& g : inst.groups) {
      offsets_.push_back(off);
      off += static_cast<int>(g.spec.support.size());
      double per = 1.0;  // C(count + s, s)
      const int s = static_cast<int>(g.spec.support.size());
      for (int i = 1; i <= s; ++i) per *= static_cast<double>(g.count + i) / i;
      states *= per;
    }
    key_size_ = off;
    if (states > 1e6)
      throw std::invalid_argument("condensed state space exceeds 1e6 states");
  }

  // Keys count reveals relative to the start state, so any valid state can
  // serve as the DP root.
  double policy_value(const MarketState& start, const EpochPolicy& policy) {
    return policy_value_from(start, CondensedKey(key_size_, 0), policy);
  }

  double optimal(const MarketState& start) {
    return optimal_from(start, CondensedKey(key_size_, 0));
  }

  double policy_value_from(const MarketState& state, const CondensedKey& key,
                           const EpochPolicy& policy) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const StateSummary s = summarize(state, inst_);
    double value = 0.0;
    if (!s.terminal) {
      AssortmentPlan plan = policy(state, inst_);
      validate_plan(plan, state, inst_);
      if (plan.total_unknown() < 1)
        throw std::invalid_argument(
            "policy offered no unknown entrant on a non-terminal state");
      value = epoch_regret_given(plan, state, inst_, s.opt_t) +
              children_value(state, key, plan, [&](const MarketState& child,
                                                   const CondensedKey& child_key) {
                return policy_value_from(child, child_key, policy);
              });
    }
    memo_.emplace(key, value);
    return value;
  }

  double optimal_from(const MarketState& state, const CondensedKey& key) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const StateSummary s = summarize(state, inst_);
    double value = 0.0;
    if (!s.terminal) {
      value = std::numeric_limits<double>::infinity();
      const int m_t = state.total_unknown();
      const int k_t = std::min(inst_.capacity, m_t);
      std::vector<int> counts(inst_.groups.size(), 0);
      for (int ell = 1; ell <= k_t; ++ell)
        enumerate_compositions(state, 0, ell, counts, [&](const std::vector<int>& uc) {
          for_each_completion(state, s, inst_.capacity - ell, [&](std::vector<int> known_ids) {
            AssortmentPlan plan;
            plan.unknown_counts = uc;
            plan.known_ids = std::move(known_ids);
            const double q =
                epoch_regret_given(plan, state, inst_, s.opt_t) +
                children_value(state, key, plan,
                               [&](const MarketState& child, const CondensedKey& child_key) {
                                 return optimal_from(child, child_key);
                               });
            value = std::min(value, q);
          });
        });
    }
    memo_.emplace(key, value);
    return value;
  }

 private:
  template <typename Recurse>
  double children_value(const MarketState& state, const CondensedKey& key,
                        const AssortmentPlan& plan, Recurse&& rec) {
    const double u_total = plan_unknown_weight(plan, inst_);
    double v = 0.0;
    for (std::size_t g = 0; g < inst_.groups.size(); ++g) {
      if (plan.unknown_counts[g] == 0) continue;
      const double p_group = plan.unknown_counts[g] * inst_.groups[g].h / u_total;
      const auto& sup = inst_.groups[g].spec.support;
      for (std::size_t a = 0; a < sup.size(); ++a) {
        MarketState child = state.after_reveal(static_cast<int>(g), sup[a].first, inst_);
        CondensedKey child_key = key;
        ++child_key[offsets_[g] + static_cast<int>(a)];
        v += p_group * sup[a].second * rec(child, child_key);
      }
    }
    return v;
  }

  template <typename Fn>
  void enumerate_compositions(const MarketState& state, std::size_t g, int left,
                              std::vector<int>& counts, Fn&& fn) {
    if (g + 1 == counts.size()) {
      if (left <= state.unknown_remaining[g]) {
        counts[g] = left;
        fn(counts);
        counts[g] = 0;
      }
      return;
    }
    for (int k = 0; k <= std::min(left, state.unknown_remaining[g]); ++k) {
      counts[g] = k;
      enumerate_compositions(state, g + 1, left - k, counts, fn);
      counts[g] = 0;
    }
  }

  // Known completions of size <= room. Unit rewards prune to the single
  // optimal completion (the most attractive known products); heterogeneous
  // rewards enumerate every subset.
  template <typename Fn>
  void for_each_completion(const MarketState& state, const StateSummary&, int room, Fn&& fn) {
    if (inst_.unit_rewards()) {
      const std::vector<int> order = attractiveness_order(state);
      std::vector<int> ids(order.begin(),
                           order.begin() + std::min<int>(room, static_cast<int>(order.size())));
      fn(std::move(ids));
      return;
    }
    const int n = static_cast<int>(state.known.size());
    fn(std::vector<int>{});
    for (int k = 1; k <= std::min(room, n); ++k)
      detail::for_each_combination(n, k, [&](const std::vector<int>& ids) {
        fn(std::vector<int>(ids));
      });
  }

  const Instance& inst_;
  std::vector<int> offsets_;
  int key_size_ = 0;
  std::map<CondensedKey, double> memo_;
};

}  // namespace detail

// Exact regret of an epoch-stationary policy from a given state.
inline double exact_policy_regret(const Instance& inst, const EpochPolicy& policy,
                                  const MarketState& start) {
  detail::RegretDp dp(inst);
  return dp.policy_value(start, policy);
}

inline double exact_policy_regret(const Instance& inst, const EpochPolicy& policy) {
  return exact_policy_regret(inst, policy, MarketState::initial(inst));
}

inline double exact_policy_regret(const Instance& inst, const PolicyKind& kind) {
  return exact_policy_regret(inst, to_epoch_policy(kind));
}

// Exact optimal value: the same recursion with a min over all feasible plans
// holding at least one unknown at each non-terminal state.
inline double optimal_value(const Instance& inst, const MarketState& start) {
  detail::RegretDp dp(inst);
  return dp.optimal(start);
}

inline double optimal_value(const Instance& inst) {
  return optimal_value(inst, MarketState::initial(inst));
}

}  // namespace mnlx
