#pragma once
// Ex-post and expected ex-post optima plus terminality: the benchmark
// quantities OPT, OPT_t and Rev_t(S*_(c)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mnlx/core.hpp"

namespace mnlx {

inline constexpr int kHeteroRewardEnumerationCap = 25;
inline constexpr double kCompositionCap = 1e7;

struct OptimumReport {
  double value = 0.0;
  AssortmentPlan plan;
};

namespace detail {

// Enumerates subsets of {0..n-1} of size exactly k in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double subset_revenue(const std::vector<KnownProduct>& known,
                             const std::vector<int>& ids, double w0) {
  double num = 0.0, den = w0;
  for (int id : ids) {
    num += known[id].reward * known[id].weight;
    den += known[id].weight;
  }
  return num / den;
}

// Best revenue over subsets of known products of size <= c, by enumeration.
inline std::pair<double, std::vector<int>> best_known_subset(
    const std::vector<KnownProduct>& known, int c, double w0) {
  const int n = static_cast<int>(known.size());
  if (n > kHeteroRewardEnumerationCap)
    throw std::invalid_argument(
        "heterogeneous-reward optimum refuses more than 25 known products");
  double best = 0.0;
  std::vector<int> best_ids;
  for (int k = 1; k <= std::min(c, n); ++k) {
    for_each_combination(n, k, [&](const std::vector<int>& ids) {
      double rev = subset_revenue(known, ids, w0);
      if (rev > best) {
        best = rev;
        best_ids = ids;
      }
    });
  }
  return {best, best_ids};
}

// Unit-reward top-c value over a weight multiset given as a sorted-descending
// base list merged with (value, count) runs.
inline double top_c_value_merged(const std::vector<double>& base_desc,
                                 std::vector<std::pair<double, int>> runs, int c,
                                 double w0) {
  std::sort(runs.begin(), runs.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double sum = 0.0;
  int taken = 0;
  std::size_t bi = 0, ri = 0;
  int run_left = runs.empty() ? 0 : runs[0].second;
  while (taken < c) {
    while (ri < runs.size() && run_left == 0)
      run_left = ++ri < runs.size() ? runs[ri].second : 0;
    const bool base_ok = bi < base_desc.size();
    const bool run_ok = ri < runs.size();
    if (!base_ok && !run_ok) break;
    if (base_ok && (!run_ok || base_desc[bi] >= runs[ri].first)) {
      sum += base_desc[bi++];
      ++taken;
    } else {
      const int take = std::min(run_left, c - taken);
      sum += runs[ri].first * take;
      run_left -= take;
      taken += take;
    }
  }
  return sum / (sum + w0);
}

}  // namespace detail

// The revenue-maximizing assortment restricted to known products. Unit-reward
// instances take the c most attractive products (lowest index on ties);
// heterogeneous rewards fall back to exhaustive subset enumeration.
inline OptimumReport best_known_assortment(const MarketState& state, const Instance& inst) {
  OptimumReport report;
  report.plan = AssortmentPlan::empty_plan(inst);
  if (inst.unit_rewards()) {
    std::vector<int> order = attractiveness_order(state);
    const int take = std::min<int>(inst.capacity, static_cast<int>(order.size()));
    report.plan.known_ids.assign(order.begin(), order.begin() + take);
  } else {
    auto [value, ids] = detail::best_known_subset(state.known, inst.capacity,
                                                  inst.outside_weight);
    (void)value;
    report.plan.known_ids = ids;
  }
  report.value = expected_revenue(report.plan, state, inst);
  return report;
}

// Full-information optimum given every entrant weight realized.
inline double ex_post_optimum(const Instance& inst, const std::vector<double>& entrant_weights) {
  if (static_cast<int>(entrant_weights.size()) != inst.num_entrants())
    throw std::invalid_argument("every entrant weight must be realized");
  MarketState full = MarketState::initial(inst);
  for (std::size_t g = 0; g < full.unknown_remaining.size(); ++g) full.unknown_remaining[g] = 0;
  for (double w : entrant_weights)
    full.known.push_back({w, inst.entrant_reward, Provenance::RevealedEntrant});
  return best_known_assortment(full, inst).value;
}

namespace detail {

inline double compositions_of(int n, int s) {
  // C(n + s - 1, s - 1)
  double r = 1.0;
  for (int i = 1; i <= s - 1; ++i) r *= static_cast<double>(n + i) / i;
  return r;
}

struct ExpectedOptWork {
  const Instance& inst;
  const MarketState& state;
  bool unit;
  std::vector<double> known_desc;             // unit path
  std::vector<std::pair<double, int>> runs;   // scratch: realized (value,count)
  std::vector<KnownProduct> scratch_known;    // hetero path
  double acc = 0.0;

  void leaf(double prob) {
    if (unit) {
      acc += prob * top_c_value_merged(known_desc, runs, inst.capacity, inst.outside_weight);
    } else {
      scratch_known = state.known;
      for (const auto& [v, cnt] : runs)
        for (int i = 0; i < cnt; ++i)
          scratch_known.push_back({v, inst.entrant_reward, Provenance::RevealedEntrant});
      acc += prob * best_known_subset(scratch_known, inst.capacity, inst.outside_weight).first;
    }
  }

  // Multinomial split of `left` unknowns of group g over its support atoms.
  void split(int g, std::size_t atom, int left, double prob) {
    const auto& sup = inst.groups[g].spec.support;
    if (atom + 1 == sup.size()) {
      if (left > 0) runs.push_back({sup[atom].first, left});
      double pr = prob * std::pow(sup[atom].second, left);
      recurse(g + 1, pr);
      if (left > 0) runs.pop_back();
      return;
    }
    double coeff = 1.0;  // C(left, k) p^k accumulated multiplicatively
    for (int k = 0; k <= left; ++k) {
      if (k > 0) runs.push_back({sup[atom].first, k});
      split(g, atom + 1, left - k, prob * coeff);
      if (k > 0) runs.pop_back();
      coeff *= static_cast<double>(left - k) / (k + 1) * sup[atom].second;
    }
  }

  void recurse(int g, double prob) {
    if (g == static_cast<int>(inst.groups.size())) {
      leaf(prob);
      return;
    }
    if (state.unknown_remaining[g] == 0) {
      recurse(g + 1, prob);
      return;
    }
    split(g, 0, state.unknown_remaining[g], prob);
  }
};

}  // namespace detail

// Exact expectation of the ex-post optimum over the joint realizations of all
// unknown entrants, enumerating value-count compositions with multinomial
// weights rather than raw tuples.
inline double expected_ex_post_optimum(const MarketState& state, const Instance& inst) {
  state.validate(inst);
  double comps = 1.0;
  for (std::size_t g = 0; g < inst.groups.size(); ++g)
    comps *= detail::compositions_of(state.unknown_remaining[g],
                                     static_cast<int>(inst.groups[g].spec.support.size()));
  if (comps > kCompositionCap)
    throw std::invalid_argument("composition count exceeds 1e7");
  if (state.total_unknown() == 0) return best_known_assortment(state, inst).value;
  detail::ExpectedOptWork work{inst, state, inst.unit_rewards(), {}, {}, {}, 0.0};
  if (work.unit) {
    work.known_desc.reserve(state.known.size());
    for (const auto& p : state.known) work.known_desc.push_back(p.weight);
    std::sort(work.known_desc.begin(), work.known_desc.end(), std::greater<>());
  }
  work.recurse(0, 1.0);
  return work.acc;
}

// A state is terminal when no unknown entrant can raise the expected optimum
// above the best known-product revenue.
inline bool is_terminal(const MarketState& state, const Instance& inst) {
  return expected_ex_post_optimum(state, inst) <= best_known_assortment(state, inst).value + kEps;
}

// Cached per-state quantities; policies and the exact oracle evaluate these
// once per condensed state.
struct StateSummary {
  double opt_t = 0.0;
  OptimumReport best_known;
  bool terminal = false;
};

inline StateSummary summarize(const MarketState& state, const Instance& inst) {
  StateSummary s;
  s.best_known = best_known_assortment(state, inst);
  s.opt_t = expected_ex_post_optimum(state, inst);
  s.terminal = s.opt_t <= s.best_known.value + kEps;
  return s;
}

}  // namespace mnlx
