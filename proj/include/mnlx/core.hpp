#pragma once
// Problem data model and the MNL choice primitives shared by every module:
// priors over entrant attraction parameters, instances, condensed market
// states, assortment plans, and the choice/revenue formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mnlx/rng.hpp"

namespace mnlx {

inline constexpr double kEps = 1e-9;       // revenue/optimum comparisons
inline constexpr double kTightTol = 1e-12; // algebraic identities

// Customer mapping from a prior belief to the scalar weight customers assign
// an unreviewed entrant.
struct HStatistic {
  enum class Kind { Mean, Quantile, Fixed };
  Kind kind = Kind::Mean;
  double value = 0.0;  // quantile level p, or the fixed weight

  static HStatistic mean() { return {Kind::Mean, 0.0}; }
  static HStatistic quantile(double p) { return {Kind::Quantile, p}; }
  static HStatistic fixed(double v) { return {Kind::Fixed, v}; }
  friend bool operator==(const HStatistic&, const HStatistic&) = default;
};

// Finite discrete prior over attraction-parameter values plus the customer
// mapping h. Values ascending, probabilities strictly positive, sum 1.
struct PriorSpec {
  std::vector<std::pair<double, double>> support;  // (value, prob)
  HStatistic h;

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

  void validate() const {
    if (support.empty()) throw std::invalid_argument("prior support must be non-empty");
    double total = 0.0;
    double prev = -1.0;
    for (const auto& [v, p] : support) {
      if (v < 0.0) throw std::invalid_argument("prior support values must be nonnegative");
      if (v <= prev) throw std::invalid_argument("prior support values must be distinct ascending");
      if (p <= 0.0) throw std::invalid_argument("prior support probabilities must be positive");
      prev = v;
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("prior support probabilities must sum to 1");
    if (h.kind == HStatistic::Kind::Quantile && (h.value < 0.0 || h.value > 1.0))
      throw std::invalid_argument("quantile level must lie in [0,1]");
    if (h.kind == HStatistic::Kind::Fixed &&
        (h.value < min_value() || h.value > max_value()))
      throw std::invalid_argument("fixed h must lie in the support hull");
  }

  double min_value() const { return support.front().first; }
  double max_value() const { return support.back().first; }

  double mean() const {
    double m = 0.0;
    for (const auto& [v, p] : support) m += v * p;
    return m;
  }

  double cdf(double x) const {
    double c = 0.0;
    for (const auto& [v, p] : support) {
      if (v <= x) c += p;
    }
    return c;
  }

  double prob_above(double x) const { return 1.0 - cdf(x); }

  // inf{x : F(x) >= p}
  double quantile(double p) const {
    double c = 0.0;
    for (const auto& [v, prob] : support) {
      c += prob;
      if (c >= p - 1e-15) return v;
    }
    return support.back().first;
  }

  double effective_weight() const {
    switch (h.kind) {
      case HStatistic::Kind::Mean: return mean();
      case HStatistic::Kind::Quantile: return quantile(h.value);
      case HStatistic::Kind::Fixed: return h.value;
    }
    return 0.0;
  }
};

inline double draw_from_prior(const PriorSpec& prior, double u) {
  double c = 0.0;
  for (const auto& [v, p] : prior.support) {
    c += p;
    if (u < c) return v;
  }
  return prior.support.back().first;
}

struct ProductEntry {
  double weight = 0.0;
  double reward = 1.0;
  friend bool operator==(const ProductEntry&, const ProductEntry&) = default;
};

// Capacity, outside option, incumbent list, one prior per entrant (identical
// entries encode the i.i.d. model), and the common entrant reward.
struct Instance {
  int capacity = 1;
  double outside_weight = 1.0;
  std::vector<ProductEntry> incumbents;
  std::vector<PriorSpec> entrant_priors;
  double entrant_reward = 1.0;

  // Entrants grouped by identical prior, in first-appearance order.
  struct PriorGroup {
    PriorSpec spec;
    int count = 0;
    double h = 0.0;               // resolved effective weight
    std::vector<int> entrants;    // entrant indices in this group
  };
  std::vector<PriorGroup> groups;

  Instance() = default;
  Instance(int capacity_, double outside_weight_, std::vector<ProductEntry> incumbents_,
           std::vector<PriorSpec> entrant_priors_, double entrant_reward_ = 1.0)
      : capacity(capacity_),
        outside_weight(outside_weight_),
        incumbents(std::move(incumbents_)),
        entrant_priors(std::move(entrant_priors_)),
        entrant_reward(entrant_reward_) {
    validate_and_index();
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.capacity == b.capacity && a.outside_weight == b.outside_weight &&
           a.incumbents == b.incumbents && a.entrant_priors == b.entrant_priors &&
           a.entrant_reward == b.entrant_reward;
  }

  int num_entrants() const { return static_cast<int>(entrant_priors.size()); }
  int num_groups() const { return static_cast<int>(groups.size()); }

  bool unit_rewards() const {
    if (entrant_reward != 1.0) return false;
    for (const auto& p : incumbents)
      if (p.reward != 1.0) return false;
    return true;
  }

  void validate_and_index() {
    if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
    if (!(outside_weight > 0.0)) throw std::invalid_argument("outside weight must be positive");
    if (static_cast<int>(incumbents.size()) < capacity)
      throw std::invalid_argument("need at least c incumbents (zero-weight dummies allowed)");
    for (const auto& p : incumbents) {
      if (p.weight < 0.0) throw std::invalid_argument("incumbent weights must be nonnegative");
      if (!(p.reward > 0.0)) throw std::invalid_argument("incumbent rewards must be positive");
    }
    if (!(entrant_reward > 0.0)) throw std::invalid_argument("entrant reward must be positive");
    groups.clear();
    for (int e = 0; e < num_entrants(); ++e) {
      const PriorSpec& spec = entrant_priors[e];
      spec.validate();
      if (!(spec.effective_weight() > 0.0))
        throw std::invalid_argument("effective entrant weight h(F) must be positive");
      bool placed = false;
      for (auto& g : groups) {
        if (g.spec == spec) {
          ++g.count;
          g.entrants.push_back(e);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({spec, 1, spec.effective_weight(), {e}});
    }
  }
};

enum class Provenance { Incumbent, RevealedEntrant };

struct KnownProduct {
  double weight = 0.0;
  double reward = 1.0;
  Provenance tag = Provenance::Incumbent;
  friend bool operator==(const KnownProduct&, const KnownProduct&) = default;
};

// Condensed knowledge state: known (weight, reward) multiset plus the
// remaining-unknown count per prior group.
struct MarketState {
  std::vector<KnownProduct> known;
  std::vector<int> unknown_remaining;  // parallel to Instance::groups

  static MarketState initial(const Instance& inst) {
    MarketState s;
    s.known.reserve(inst.incumbents.size());
    for (const auto& p : inst.incumbents)
      s.known.push_back({p.weight, p.reward, Provenance::Incumbent});
    s.unknown_remaining.reserve(inst.groups.size());
    for (const auto& g : inst.groups) s.unknown_remaining.push_back(g.count);
    return s;
  }

  int total_unknown() const {
    return std::accumulate(unknown_remaining.begin(), unknown_remaining.end(), 0);
  }

  MarketState after_reveal(int group, double weight, const Instance& inst) const {
    if (group < 0 || group >= static_cast<int>(unknown_remaining.size()) ||
        unknown_remaining[group] <= 0)
      throw std::invalid_argument("no unknown entrant left in that prior group");
    MarketState next = *this;
    next.known.push_back({weight, inst.entrant_reward, Provenance::RevealedEntrant});
    --next.unknown_remaining[group];
    return next;
  }

  void validate(const Instance& inst) const {
    if (unknown_remaining.size() != inst.groups.size())
      throw std::invalid_argument("state group count mismatch");
    int revealed = 0;
    for (const auto& p : known)
      if (p.tag == Provenance::RevealedEntrant) ++revealed;
    if (known.size() < inst.incumbents.size())
      throw std::invalid_argument("state must contain every incumbent");
    int remaining = total_unknown();
    for (int r : unknown_remaining)
      if (r < 0) throw std::invalid_argument("negative unknown count");
    if (remaining + revealed != inst.num_entrants())
      throw std::invalid_argument("unknown counts plus revealed entrants must equal m");
  }
};

// An offered set: known product indices plus a count of unknown entrants per
// prior group.
struct AssortmentPlan {
  std::vector<int> known_ids;
  std::vector<int> unknown_counts;

  int total_unknown() const {
    return std::accumulate(unknown_counts.begin(), unknown_counts.end(), 0);
  }
  int size() const { return static_cast<int>(known_ids.size()) + total_unknown(); }

  static AssortmentPlan empty_plan(const Instance& inst) {
    AssortmentPlan p;
    p.unknown_counts.assign(inst.groups.size(), 0);
    return p;
  }

  // Set-wise comparison; member order is irrelevant.
  friend bool same_plan(const AssortmentPlan& a, const AssortmentPlan& b) {
    if (a.unknown_counts != b.unknown_counts) return false;
    std::vector<int> ka = a.known_ids, kb = b.known_ids;
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
  }
};

inline void validate_plan(const AssortmentPlan& plan, const MarketState& state,
                          const Instance& inst) {
  if (plan.unknown_counts.size() != inst.groups.size())
    throw std::invalid_argument("plan group count mismatch");
  if (plan.size() > inst.capacity) throw std::invalid_argument("plan exceeds capacity");
  for (std::size_t g = 0; g < plan.unknown_counts.size(); ++g) {
    if (plan.unknown_counts[g] < 0 || plan.unknown_counts[g] > state.unknown_remaining[g])
      throw std::invalid_argument("plan offers more unknowns than remain");
  }
  std::vector<int> seen;
  for (int id : plan.known_ids) {
    if (id < 0 || id >= static_cast<int>(state.known.size()))
      throw std::invalid_argument("plan known id out of range");
    if (std::find(seen.begin(), seen.end(), id) != seen.end())
      throw std::invalid_argument("plan known ids must be distinct");
    seen.push_back(id);
  }
}

inline double plan_known_weight(const AssortmentPlan& plan, const MarketState& state) {
  double w = 0.0;
  for (int id : plan.known_ids) w += state.known[id].weight;
  return w;
}

inline double plan_unknown_weight(const AssortmentPlan& plan, const Instance& inst) {
  double w = 0.0;
  for (std::size_t g = 0; g < plan.unknown_counts.size(); ++g)
    w += plan.unknown_counts[g] * inst.groups[g].h;
  return w;
}

struct ChoiceDistribution {
  std::vector<double> known_probs;          // parallel to plan.known_ids
  std::vector<double> unknown_group_probs;  // total probability per prior group
  double outside_prob = 1.0;

  double total() const {
    return std::accumulate(known_probs.begin(), known_probs.end(), 0.0) +
           std::accumulate(unknown_group_probs.begin(), unknown_group_probs.end(), 0.0) +
           outside_prob;
  }
};

inline ChoiceDistribution choice_probabilities(const AssortmentPlan& plan,
                                               const MarketState& state,
                                               const Instance& inst) {
  validate_plan(plan, state, inst);
  const double denom =
      plan_known_weight(plan, state) + plan_unknown_weight(plan, inst) + inst.outside_weight;
  ChoiceDistribution d;
  d.known_probs.reserve(plan.known_ids.size());
  for (int id : plan.known_ids) d.known_probs.push_back(state.known[id].weight / denom);
  d.unknown_group_probs.reserve(plan.unknown_counts.size());
  for (std::size_t g = 0; g < plan.unknown_counts.size(); ++g)
    d.unknown_group_probs.push_back(plan.unknown_counts[g] * inst.groups[g].h / denom);
  d.outside_prob = inst.outside_weight / denom;
  return d;
}

inline double expected_revenue(const AssortmentPlan& plan, const MarketState& state,
                               const Instance& inst) {
  validate_plan(plan, state, inst);
  double num = 0.0;
  for (int id : plan.known_ids) num += state.known[id].reward * state.known[id].weight;
  for (std::size_t g = 0; g < plan.unknown_counts.size(); ++g)
    num += inst.entrant_reward * plan.unknown_counts[g] * inst.groups[g].h;
  const double denom =
      plan_known_weight(plan, state) + plan_unknown_weight(plan, inst) + inst.outside_weight;
  return num / denom;
}

struct ChosenOption {
  enum class Kind { Known, Unknown, Outside };
  Kind kind = Kind::Outside;
  int index = -1;  // known id, or prior group
  friend bool operator==(const ChosenOption&, const ChosenOption&) = default;
};

// One categorical draw from choice_probabilities, driven by u in [0,1).
inline ChosenOption choose_option(const AssortmentPlan& plan, const MarketState& state,
                                  const Instance& inst, double u) {
  validate_plan(plan, state, inst);
  const double denom =
      plan_known_weight(plan, state) + plan_unknown_weight(plan, inst) + inst.outside_weight;
  double x = u * denom;
  for (int id : plan.known_ids) {
    x -= state.known[id].weight;
    if (x < 0.0) return {ChosenOption::Kind::Known, id};
  }
  for (std::size_t g = 0; g < plan.unknown_counts.size(); ++g) {
    x -= plan.unknown_counts[g] * inst.groups[g].h;
    if (x < 0.0) return {ChosenOption::Kind::Unknown, static_cast<int>(g)};
  }
  return {ChosenOption::Kind::Outside, -1};
}

struct ChoiceOutcome {
  ChosenOption option;
  std::optional<double> revealed_weight;  // set when an unknown entrant is chosen
};

inline ChoiceOutcome sample_choice(const AssortmentPlan& plan, const MarketState& state,
                                   const Instance& inst, KeyedRng& rng) {
  ChoiceOutcome out;
  out.option = choose_option(plan, state, inst, rng.next_unit());
  if (out.option.kind == ChosenOption::Kind::Unknown)
    out.revealed_weight = draw_from_prior(inst.groups[out.option.index].spec, rng.next_unit());
  return out;
}

// Known product indices ordered most attractive first (weight desc, index asc).
inline std::vector<int> attractiveness_order(const MarketState& state) {
  std::vector<int> idx(state.known.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return state.known[a].weight > state.known[b].weight; });
  return idx;
}

inline double truncate3(double x) { return std::floor(x * 1000.0) / 1000.0; }

}  // namespace mnlx
