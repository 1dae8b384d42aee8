#pragma once
// The policy zoo. Each decide maps a MarketState to an AssortmentPlan; this
// is the decision layer consumed by the simulator and the exact oracle.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mnlx/core.hpp"
#include "mnlx/epoch.hpp"
#include "mnlx/optimum.hpp"

namespace mnlx {

struct UcbSchedule {
  enum class Kind { Constant, Table, AffineClamp };
  Kind kind = Kind::Constant;
  double p = 1.0;
  std::vector<double> values;  // Table: held at the last entry past the end
  double a = 0.0, b = 0.0;     // AffineClamp: p_t = clamp(a + b*t, 0, 1)

  static UcbSchedule constant(double p_) {
    UcbSchedule s;
    s.kind = Kind::Constant;
    s.p = p_;
    s.validate();
    return s;
  }
  static UcbSchedule table(std::vector<double> v) {
    UcbSchedule s;
    s.kind = Kind::Table;
    s.values = std::move(v);
    s.validate();
    return s;
  }
  static UcbSchedule affine_clamp(double a_, double b_) {
    UcbSchedule s;
    s.kind = Kind::AffineClamp;
    s.a = a_;
    s.b = b_;
    s.validate();
    return s;
  }

  void validate() const {
    switch (kind) {
      case Kind::Constant:
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("ucb level must lie in [0,1]");
        break;
      case Kind::Table: {
        if (values.empty()) throw std::invalid_argument("ucb table must be non-empty");
        double prev = 0.0;
        for (double v : values) {
          if (v < 0.0 || v > 1.0) throw std::invalid_argument("ucb level must lie in [0,1]");
          if (v < prev) throw std::invalid_argument("ucb schedule must be nondecreasing");
          prev = v;
        }
        break;
      }
      case Kind::AffineClamp:
        if (b < 0.0) throw std::invalid_argument("ucb schedule must be nondecreasing");
        break;
    }
  }

  double at(long round) const {
    switch (kind) {
      case Kind::Constant: return p;
      case Kind::Table: {
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(1L, round)),
                                                    values.size());
        return values[i - 1];
      }
      case Kind::AffineClamp: return std::clamp(a + b * static_cast<double>(round), 0.0, 1.0);
    }
    return 1.0;
  }

  friend bool operator==(const UcbSchedule&, const UcbSchedule&) = default;
};

namespace detail {

inline void require_single_prior(const Instance& inst, const char* who) {
  if (inst.num_groups() != 1)
    throw std::invalid_argument(std::string(who) + " requires a homogeneous entrant prior");
}

inline void require_unit_rewards(const Instance& inst, const char* who) {
  if (!inst.unit_rewards())
    throw std::invalid_argument(std::string(who) + " requires unit rewards");
}

inline AssortmentPlan top_known_with_unknowns(const MarketState& state, const Instance& inst,
                                              int ell) {
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  plan.unknown_counts[0] = ell;
  const std::vector<int> order = attractiveness_order(state);
  for (int k = 0; k < inst.capacity - ell; ++k) plan.known_ids.push_back(order[k]);
  return plan;
}

}  // namespace detail

namespace detail {

inline AssortmentPlan efa_explore(const MarketState& state, const Instance& inst,
                                  const StateSummary& s) {
  const int k_t = std::min(inst.capacity, state.total_unknown());
  int ell_t = 0;
  for (int ell = 1; ell <= k_t; ++ell) {
    if (s.opt_t >= fictitious_revenue_alpha(state, inst, ell) - kEps) ell_t = ell;
  }
  if (ell_t == 0)
    throw std::logic_error("efa: exploration branch reached with empty threshold set");
  return top_known_with_unknowns(state, inst, ell_t);
}

inline AssortmentPlan hefa_explore(const MarketState& state, const Instance& inst,
                                   const StateSummary& s) {
  const int m_t = state.total_unknown();
  const int k_t = std::min(inst.capacity, m_t);
  int ell_t = 0;
  for (int ell = 1; ell <= k_t; ++ell) {
    if (s.opt_t >= cumulative_benefit_beta_given(state, inst, ell, s.opt_t) - kEps) ell_t = ell;
  }
  if (ell_t == 0)
    throw std::logic_error("hefa: exploration branch reached with empty threshold set");
  int n_neg = 0;
  for (std::size_t i = 0; i < state.known.size(); ++i)
    if (scaled_interim_regret_given(state, inst, static_cast<int>(i), s.opt_t) < 0.0) ++n_neg;
  const int ell_star = std::min(std::max(ell_t, inst.capacity - n_neg), m_t);
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  plan.unknown_counts[0] = ell_star;
  const std::vector<int> order = sir_order(state, inst, s.opt_t);
  const int take = std::min(inst.capacity - ell_star, n_neg);
  for (int k = 0; k < take; ++k) plan.known_ids.push_back(order[k]);
  return plan;
}

inline AssortmentPlan explore_all_explore(const MarketState& state, const Instance& inst,
                                          const StateSummary&) {
  const int k_t = std::min(inst.capacity, state.total_unknown());
  return top_known_with_unknowns(state, inst, k_t);
}

inline AssortmentPlan explore_one_explore(const MarketState& state, const Instance& inst,
                                          const StateSummary&) {
  return top_known_with_unknowns(state, inst, 1);
}

}  // namespace detail

// EFA exploration step: the largest l in 1..k_t with OPT_t >= alpha_t(l),
// offered with the c-l most attractive known products; exploitation offers
// the top-c known products.
inline AssortmentPlan efa_decide(const MarketState& state, const Instance& inst) {
  detail::require_single_prior(inst, "efa");
  detail::require_unit_rewards(inst, "efa");
  const StateSummary s = summarize(state, inst);
  if (s.terminal) return s.best_known.plan;
  return detail::efa_explore(state, inst, s);
}

// HEFA: thresholds on the cumulative benefit beta, then l* = min(max(l_t,
// c - n_t^{<0}), m_t) unknowns with the min(c - l*, n_t^{<0}) lowest-SIR
// known products.
inline AssortmentPlan hefa_decide(const MarketState& state, const Instance& inst) {
  detail::require_single_prior(inst, "hefa");
  const StateSummary s = summarize(state, inst);
  if (s.terminal) return s.best_known.plan;
  return detail::hefa_explore(state, inst, s);
}

// Explores k_t = min(c, m_t) unknowns with the most attractive known
// completion while exploration is worth it.
inline AssortmentPlan explore_all_decide(const MarketState& state, const Instance& inst) {
  detail::require_single_prior(inst, "explore_all");
  detail::require_unit_rewards(inst, "explore_all");
  const StateSummary s = summarize(state, inst);
  if (s.terminal) return s.best_known.plan;
  return detail::explore_all_explore(state, inst, s);
}

// Explores one unknown with the c-1 most attractive known products.
inline AssortmentPlan explore_one_decide(const MarketState& state, const Instance& inst) {
  detail::require_single_prior(inst, "explore_one");
  detail::require_unit_rewards(inst, "explore_one");
  const StateSummary s = summarize(state, inst);
  if (s.terminal) return s.best_known.plan;
  return detail::explore_one_explore(state, inst, s);
}

// Index policy: u_t(i) is the p_t-quantile of the prior for unknowns and w_i
// for known products; offers the c highest indices. Ties place known products
// before unknowns, then lowest index.
inline AssortmentPlan ucb_decide(const MarketState& state, const Instance& inst,
                                 const UcbSchedule& schedule, long round) {
  detail::require_single_prior(inst, "ucb");
  detail::require_unit_rewards(inst, "ucb");
  const double level = schedule.at(round);
  const double u_unknown = inst.groups[0].spec.quantile(level);
  const int m_t = state.total_unknown();
  struct Cand {
    double u;
    int cls;  // 0 known, 1 unknown
    int idx;
  };
  std::vector<Cand> cands;
  cands.reserve(state.known.size() + std::min(m_t, inst.capacity));
  for (std::size_t i = 0; i < state.known.size(); ++i)
    cands.push_back({state.known[i].weight, 0, static_cast<int>(i)});
  for (int j = 0; j < std::min(m_t, inst.capacity); ++j) cands.push_back({u_unknown, 1, j});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.u != b.u) return a.u > b.u;
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.idx < b.idx;
  });
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  for (int k = 0; k < inst.capacity && k < static_cast<int>(cands.size()); ++k) {
    if (cands[k].cls == 0)
      plan.known_ids.push_back(cands[k].idx);
    else
      ++plan.unknown_counts[0];
  }
  return plan;
}

// Samples one attraction parameter per unknown entrant per round and offers
// the revenue-maximizing (top-c by weight) assortment under the samples.
inline AssortmentPlan ts_decide(const MarketState& state, const Instance& inst, KeyedRng& rng) {
  detail::require_single_prior(inst, "ts");
  detail::require_unit_rewards(inst, "ts");
  const int m_t = state.total_unknown();
  struct Cand {
    double w;
    int cls;
    int idx;
  };
  std::vector<Cand> cands;
  cands.reserve(state.known.size() + m_t);
  for (std::size_t i = 0; i < state.known.size(); ++i)
    cands.push_back({state.known[i].weight, 0, static_cast<int>(i)});
  for (int j = 0; j < m_t; ++j)
    cands.push_back({draw_from_prior(inst.groups[0].spec, rng.next_unit()), 1, j});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.idx < b.idx;
  });
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  for (int k = 0; k < inst.capacity && k < static_cast<int>(cands.size()); ++k) {
    if (cands[k].cls == 0)
      plan.known_ids.push_back(cands[k].idx);
    else
      ++plan.unknown_counts[0];
  }
  return plan;
}

// pi(S): the entrant together with a fixed incumbent set S until the entrant
// is purchased, the revenue-maximizing known assortment afterwards.
inline AssortmentPlan fixed_set_decide(const MarketState& state, const Instance& inst,
                                       const std::vector<int>& fixed_known_ids) {
  if (inst.num_entrants() != 1)
    throw std::invalid_argument("fixed_set requires a single-entrant instance");
  if (static_cast<int>(fixed_known_ids.size()) > inst.capacity - 1)
    throw std::invalid_argument("fixed set must have size at most c-1");
  if (state.total_unknown() == 0) return best_known_assortment(state, inst).plan;
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  plan.known_ids = fixed_known_ids;
  plan.unknown_counts[0] = 1;
  validate_plan(plan, state, inst);
  return plan;
}

// pi^S on the two-entrant class: phase 1 offers the subset's unknowns filled
// with top incumbents, phase 2 the remaining unknown with the single most
// attractive known product, phase 3 the top-2 known products.
inline AssortmentPlan hetero_prior_decide(const MarketState& state, const Instance& inst,
                                          const std::vector<int>& subset) {
  if (inst.num_entrants() != 2 || inst.incumbents.size() != 2 || inst.capacity != 2)
    throw std::invalid_argument(
        "hetero_prior requires two entrants, two incumbents, and capacity 2");
  if (subset.empty() || subset.size() > 2)
    throw std::invalid_argument("subset must be a non-empty subset of {1,2}");
  for (int e : subset)
    if (e != 1 && e != 2) throw std::invalid_argument("subset entries must be 1 or 2");
  const int unknowns = state.total_unknown();
  if (unknowns == 0) return best_known_assortment(state, inst).plan;
  AssortmentPlan plan = AssortmentPlan::empty_plan(inst);
  const std::vector<int> order = attractiveness_order(state);
  if (unknowns == 2) {
    if (inst.num_groups() == 2) {
      for (int e : subset) plan.unknown_counts[e - 1] = 1;
    } else {
      plan.unknown_counts[0] = static_cast<int>(subset.size());
    }
    const int fill = inst.capacity - plan.total_unknown();
    for (int k = 0; k < fill; ++k) plan.known_ids.push_back(order[k]);
  } else {
    for (std::size_t g = 0; g < state.unknown_remaining.size(); ++g)
      if (state.unknown_remaining[g] > 0) plan.unknown_counts[g] = 1;
    plan.known_ids.push_back(order[0]);
  }
  validate_plan(plan, state, inst);
  return plan;
}

struct EfaPolicy {
  friend bool operator==(const EfaPolicy&, const EfaPolicy&) = default;
};
struct HefaPolicy {
  friend bool operator==(const HefaPolicy&, const HefaPolicy&) = default;
};
struct ExploreAllPolicy {
  friend bool operator==(const ExploreAllPolicy&, const ExploreAllPolicy&) = default;
};
struct ExploreOnePolicy {
  friend bool operator==(const ExploreOnePolicy&, const ExploreOnePolicy&) = default;
};
struct UcbPolicy {
  UcbSchedule schedule;
  friend bool operator==(const UcbPolicy&, const UcbPolicy&) = default;
};
struct TsPolicy {
  friend bool operator==(const TsPolicy&, const TsPolicy&) = default;
};
struct FixedSetPolicy {
  std::vector<int> known_ids;
  friend bool operator==(const FixedSetPolicy&, const FixedSetPolicy&) = default;
};
struct HeteroPriorPolicy {
  std::vector<int> subset;
  friend bool operator==(const HeteroPriorPolicy&, const HeteroPriorPolicy&) = default;
};
struct NoisyTopKPolicy {
  friend bool operator==(const NoisyTopKPolicy&, const NoisyTopKPolicy&) = default;
};

using PolicyKind = std::variant<EfaPolicy, HefaPolicy, ExploreAllPolicy, ExploreOnePolicy,
                                UcbPolicy, TsPolicy, FixedSetPolicy, HeteroPriorPolicy,
                                NoisyTopKPolicy>;

inline std::string policy_name(const PolicyKind& kind) {
  struct Namer {
    std::string operator()(const EfaPolicy&) const { return "efa"; }
    std::string operator()(const HefaPolicy&) const { return "hefa"; }
    std::string operator()(const ExploreAllPolicy&) const { return "explore_all"; }
    std::string operator()(const ExploreOnePolicy&) const { return "explore_one"; }
    std::string operator()(const UcbPolicy&) const { return "ucb"; }
    std::string operator()(const TsPolicy&) const { return "ts"; }
    std::string operator()(const FixedSetPolicy&) const { return "fixed_set"; }
    std::string operator()(const HeteroPriorPolicy&) const { return "hetero_prior"; }
    std::string operator()(const NoisyTopKPolicy&) const { return "noisy_topk"; }
  };
  return std::visit(Namer{}, kind);
}

// Policies whose plan depends only on the condensed state.
inline bool epoch_stationary(const PolicyKind& kind) {
  return !std::holds_alternative<UcbPolicy>(kind) && !std::holds_alternative<TsPolicy>(kind) &&
         !std::holds_alternative<NoisyTopKPolicy>(kind);
}

}  // namespace mnlx
