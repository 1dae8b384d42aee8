#pragma once
// Seeded Monte Carlo episode runner and regret estimator. Entrant weights are
// sampled up front (fixing the ex-post optimum), per-round regret accrues in
// conditional-expectation form OPT - Rev_t(S_t), and divergence at the
// horizon cap is a first-class outcome.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mnlx/core.hpp"
#include "mnlx/optimum.hpp"
#include "mnlx/policies.hpp"
#include "mnlx/rng.hpp"

namespace mnlx {

inline constexpr long kDefaultHorizonCap = 1'000'000;

struct EpisodeLog {
  long rounds = 0;
  double total_regret = 0.0;
  std::vector<std::pair<long, double>> purchases;  // (round, revealed weight)
  bool diverged = false;
  friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

struct RegretEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long reps = 0;
  long diverged_count = 0;
};

namespace detail {

struct EpisodeCtx {
  StateSummary summary;
  AssortmentPlan stationary_plan;
  bool has_stationary_plan = false;
};

inline void refresh_ctx(EpisodeCtx& ctx, const MarketState& state, const Instance& inst,
                        const PolicyKind& policy) {
  ctx.summary = summarize(state, inst);
  ctx.has_stationary_plan = epoch_stationary(policy);
  if (!ctx.has_stationary_plan) return;
  if (ctx.summary.terminal) {
    ctx.stationary_plan = ctx.summary.best_known.plan;
    return;
  }
  struct Decider {
    const MarketState& s;
    const Instance& i;
    const StateSummary& sum;
    AssortmentPlan operator()(const EfaPolicy&) const { return detail::efa_explore(s, i, sum); }
    AssortmentPlan operator()(const HefaPolicy&) const { return detail::hefa_explore(s, i, sum); }
    AssortmentPlan operator()(const ExploreAllPolicy&) const {
      return detail::explore_all_explore(s, i, sum);
    }
    AssortmentPlan operator()(const ExploreOnePolicy&) const {
      return detail::explore_one_explore(s, i, sum);
    }
    AssortmentPlan operator()(const FixedSetPolicy& p) const {
      return fixed_set_decide(s, i, p.known_ids);
    }
    AssortmentPlan operator()(const HeteroPriorPolicy& p) const {
      return hetero_prior_decide(s, i, p.subset);
    }
    AssortmentPlan operator()(const UcbPolicy&) const { throw std::logic_error("round-indexed"); }
    AssortmentPlan operator()(const TsPolicy&) const { throw std::logic_error("round-indexed"); }
    AssortmentPlan operator()(const NoisyTopKPolicy&) const {
      throw std::invalid_argument("noisy policies run through run_noisy_episode");
    }
  };
  ctx.stationary_plan = std::visit(Decider{state, inst, ctx.summary}, policy);
}

}  // namespace detail

inline EpisodeLog run_episode(const Instance& inst, const PolicyKind& policy,
                              std::uint64_t master_seed, std::uint64_t replication,
                              long horizon_cap = kDefaultHorizonCap) {
  if (horizon_cap < 1) throw std::invalid_argument("horizon cap must be at least 1");
  if (std::holds_alternative<NoisyTopKPolicy>(policy))
    throw std::invalid_argument("noisy policies run through run_noisy_episode");

  // All entrant weights first; OPT is the realized ex-post optimum.
  std::vector<double> weights(inst.num_entrants());
  for (int e = 0; e < inst.num_entrants(); ++e) {
    const RngKey key{master_seed, replication, 0,
                     static_cast<std::uint64_t>(DrawKind::EntrantWeight),
                     static_cast<std::uint64_t>(e)};
    weights[e] = draw_from_prior(inst.entrant_priors[e], uniform_at(key));
  }
  const double opt = ex_post_optimum(inst, weights);

  // Per-group reveal queues, in entrant order (entrants in a group are
  // exchangeable).
  std::vector<std::vector<double>> queue(inst.groups.size());
  for (std::size_t g = 0; g < inst.groups.size(); ++g)
    for (int e : inst.groups[g].entrants) queue[g].push_back(weights[e]);
  std::vector<std::size_t> queue_pos(inst.groups.size(), 0);

  MarketState state = MarketState::initial(inst);
  detail::EpisodeCtx ctx;
  detail::refresh_ctx(ctx, state, inst, policy);

  EpisodeLog log;
  for (long t = 1;; ++t) {
    if (t > horizon_cap) {
      log.diverged = true;
      break;
    }
    AssortmentPlan plan;
    if (ctx.has_stationary_plan) {
      plan = ctx.stationary_plan;
    } else if (const auto* ucb = std::get_if<UcbPolicy>(&policy)) {
      plan = ucb_decide(state, inst, ucb->schedule, t);
    } else {
      KeyedRng rng(RngKey{master_seed, replication, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(DrawKind::TsSample), 0});
      plan = ts_decide(state, inst, rng);
    }
    if (ctx.summary.terminal && plan.total_unknown() == 0 &&
        std::abs(expected_revenue(plan, state, inst) - ctx.summary.best_known.value) <= kEps)
      break;  // zero forward regret

    log.total_regret += opt - expected_revenue(plan, state, inst);
    ++log.rounds;

    const RngKey choice_key{master_seed, replication, static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(DrawKind::Choice), 0};
    const ChosenOption choice = choose_option(plan, state, inst, uniform_at(choice_key));
    if (choice.kind == ChosenOption::Kind::Unknown) {
      const int g = choice.index;
      const double w = queue[g][queue_pos[g]++];
      state = state.after_reveal(g, w, inst);
      log.purchases.push_back({t, w});
      detail::refresh_ctx(ctx, state, inst, policy);
    }
  }
  return log;
}

// Mean and standard error over independent replication streams derived from
// (master_seed, replication). Diverged episodes are excluded from the mean
// and reported separately; the fold runs in replication-index order.
inline RegretEstimate estimate_regret(const Instance& inst, const PolicyKind& policy,
                                      long reps, std::uint64_t master_seed,
                                      long horizon_cap = kDefaultHorizonCap, int threads = 1) {
  if (reps < 2) throw std::invalid_argument("need at least 2 replications");
  std::vector<double> totals(reps, 0.0);
  std::vector<char> diverged(reps, 0);
  auto work = [&](long begin, long end) {
    for (long r = begin; r < end; ++r) {
      EpisodeLog log = run_episode(inst, policy, master_seed, static_cast<std::uint64_t>(r),
                                   horizon_cap);
      totals[r] = log.total_regret;
      diverged[r] = log.diverged ? 1 : 0;
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    work(0, reps);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (reps + threads - 1) / threads;
    for (int i = 0; i < threads; ++i) {
      const long b = i * chunk;
      const long e = std::min<long>(reps, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  RegretEstimate est;
  est.reps = reps;
  double sum = 0.0;
  long n = 0;
  for (long r = 0; r < reps; ++r) {
    if (diverged[r]) {
      ++est.diverged_count;
      continue;
    }
    sum += totals[r];
    ++n;
  }
  if (n > 0) est.mean = sum / n;
  double ss = 0.0;
  for (long r = 0; r < reps; ++r) {
    if (diverged[r]) continue;
    const double d = totals[r] - est.mean;
    ss += d * d;
  }
  if (n > 1) est.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  return est;
}

}  // namespace mnlx
