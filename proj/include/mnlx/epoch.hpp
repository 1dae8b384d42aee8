#pragma once
// Closed-form epoch quantities: expected epoch length tau, epoch reward,
// outside-option visits, the epoch regret, the fictitious-assortment revenue
// alpha_t(l), the reward-loss/time-gain ratio, and the scaled-interim-regret
// machinery (SIR, beta) for heterogeneous rewards.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mnlx/core.hpp"
#include "mnlx/optimum.hpp"

namespace mnlx {

struct EpochQuantities {
  double tau = 0.0;             // expected rounds per epoch
  double reward = 0.0;          // expected total reward per epoch
  double outside_visits = 0.0;  // expected outside-option choices per epoch
};

// With U the summed effective weight of the plan's unknowns and W the summed
// weight of its known members: tau = (W+U+w0)/U, o = w0/U, and each known i
// is chosen w_i/U times in expectation plus one entrant purchase.
inline EpochQuantities epoch_quantities(const AssortmentPlan& plan, const MarketState& state,
                                        const Instance& inst) {
  validate_plan(plan, state, inst);
  if (plan.total_unknown() < 1)
    throw std::invalid_argument("epoch quantities need at least one unknown in the plan");
  const double u = plan_unknown_weight(plan, inst);
  const double w = plan_known_weight(plan, state);
  EpochQuantities q;
  q.tau = (w + u + inst.outside_weight) / u;
  q.outside_visits = inst.outside_weight / u;
  double known_reward = 0.0;
  for (int id : plan.known_ids) known_reward += state.known[id].reward * state.known[id].weight;
  q.reward = known_reward / u + inst.entrant_reward;
  return q;
}

inline double epoch_regret_given(const AssortmentPlan& plan, const MarketState& state,
                                 const Instance& inst, double opt_t) {
  const EpochQuantities q = epoch_quantities(plan, state, inst);
  const double value = opt_t * q.tau - q.reward;
  if (inst.unit_rewards()) {
    // cross-check against the (OPT-1)(tau-o) + OPT*o decomposition
    const double alt = (opt_t - 1.0) * (q.tau - q.outside_visits) + opt_t * q.outside_visits;
    if (std::abs(value - alt) > kTightTol * std::max(1.0, std::abs(value)))
      throw std::logic_error("epoch regret forms disagree beyond 1e-12");
  }
  return value;
}

// EpochReg_t(S) = OPT_t * tau(S) - r(S).
inline double epoch_regret(const AssortmentPlan& plan, const MarketState& state,
                           const Instance& inst) {
  return epoch_regret_given(plan, state, inst, expected_ex_post_optimum(state, inst));
}

// Revenue of the fictitious assortment holding the c-l most attractive known
// products and l replicas of the (c-l+1)-th most attractive one.
inline double fictitious_revenue_alpha(const MarketState& state, const Instance& inst, int ell) {
  if (!inst.unit_rewards())
    throw std::invalid_argument("alpha is defined for unit rewards");
  if (ell < 1 || ell > inst.capacity) throw std::invalid_argument("l must lie in 1..c");
  if (static_cast<int>(state.known.size()) < inst.capacity)
    throw std::invalid_argument("alpha needs at least c known products");
  const std::vector<int> order = attractiveness_order(state);
  double x = 0.0;
  for (int k = 0; k < inst.capacity - ell; ++k) x += state.known[order[k]].weight;
  x += ell * state.known[order[inst.capacity - ell]].weight;
  return x / (x + inst.outside_weight);
}

namespace detail {

// Single remaining prior group, for the operations stated for one h(F).
inline int sole_unknown_group(const MarketState& state) {
  int g = -1;
  for (std::size_t i = 0; i < state.unknown_remaining.size(); ++i) {
    if (state.unknown_remaining[i] > 0) {
      if (g >= 0) return -2;
      g = static_cast<int>(i);
    }
  }
  return g;
}

}  // namespace detail

// (r*(l) - r*(l+1)) / (tau*(l) - tau*(l+1)) with starred quantities taken at
// the optimal completion S*_(c-l); equals alpha_t(l+1).
inline double reward_loss_time_gain_ratio(const MarketState& state, const Instance& inst,
                                          int ell) {
  if (!inst.unit_rewards())
    throw std::invalid_argument("ratio is defined for unit rewards");
  if (ell < 1 || ell > inst.capacity - 1) throw std::invalid_argument("l must lie in 1..c-1");
  const int g = detail::sole_unknown_group(state);
  if (g == -2) throw std::invalid_argument("mixed-prior states are not supported here");
  if (g == -1) throw std::invalid_argument("ratio needs an unknown entrant");
  if (static_cast<int>(state.known.size()) < inst.capacity)
    throw std::invalid_argument("ratio needs at least c known products");
  const double h = inst.groups[g].h;
  const std::vector<int> order = attractiveness_order(state);
  auto top_weight = [&](int k) {
    double w = 0.0;
    for (int i = 0; i < k; ++i) w += state.known[order[i]].weight;
    return w;
  };
  auto tau_star = [&](int l) {
    return (top_weight(inst.capacity - l) + l * h + inst.outside_weight) / (l * h);
  };
  auto reward_star = [&](int l) { return top_weight(inst.capacity - l) / (l * h) + 1.0; };
  const double dt = tau_star(ell) - tau_star(ell + 1);
  if (dt <= 0.0) throw std::runtime_error("time gain vanished; w0 must be positive");
  return (reward_star(ell) - reward_star(ell + 1)) / dt;
}

inline double scaled_interim_regret_given(const MarketState& state, const Instance& inst,
                                          int known_index, double opt_t) {
  if (known_index < 0 || known_index >= static_cast<int>(state.known.size()))
    throw std::out_of_range("known index out of range");
  const KnownProduct& p = state.known[known_index];
  return (opt_t - p.reward) * p.weight / inst.outside_weight;
}

// SIR_i(t) = (OPT_t - r_i) * w_i / w0.
inline double scaled_interim_regret(const MarketState& state, const Instance& inst,
                                    int known_index) {
  return scaled_interim_regret_given(state, inst, known_index,
                                     expected_ex_post_optimum(state, inst));
}

// Known indices ordered by ascending scaled interim regret (ties by index).
inline std::vector<int> sir_order(const MarketState& state, const Instance& inst, double opt_t) {
  std::vector<double> sir(state.known.size());
  for (std::size_t i = 0; i < state.known.size(); ++i)
    sir[i] = scaled_interim_regret_given(state, inst, static_cast<int>(i), opt_t);
  std::vector<int> idx(state.known.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return sir[a] < sir[b]; });
  return idx;
}

inline double cumulative_benefit_beta_given(const MarketState& state, const Instance& inst,
                                            int ell, double opt_t) {
  if (ell < 1 || ell > inst.capacity) throw std::invalid_argument("l must lie in 1..c");
  if (static_cast<int>(state.known.size()) < inst.capacity - ell + 1)
    throw std::invalid_argument("beta needs at least c-l+1 known products");
  const std::vector<int> order = sir_order(state, inst, opt_t);
  double beta = 0.0;
  for (int k = 0; k < inst.capacity - ell; ++k)
    beta -= scaled_interim_regret_given(state, inst, order[k], opt_t);
  beta -= ell * scaled_interim_regret_given(state, inst, order[inst.capacity - ell], opt_t);
  return beta;
}

// beta_t(l) = -sum_{i=1}^{c-l} SIR_(i) - l * SIR_(c-l+1), SIR_(k) the k-th
// lowest scaled interim regret.
inline double cumulative_benefit_beta(const MarketState& state, const Instance& inst, int ell) {
  return cumulative_benefit_beta_given(state, inst, ell,
                                       expected_ex_post_optimum(state, inst));
}

}  // namespace mnlx
