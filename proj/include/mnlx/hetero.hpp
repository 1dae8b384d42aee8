#pragma once
// Closed-form regret evaluation and classification for the two-entrant
// heterogeneous-prior class: exact expectations of the three exploration
// policies' regrets, their pairwise differences, the Bernoulli-like quadratic
// and its threshold.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mnlx/core.hpp"

namespace mnlx {

// n = 4: two entrants with priors F1, F2, two incumbents w3 >= w4, capacity
// 2, unit rewards, w0 = 1. Both priors must put mass above w3 so exploration
// is always worth it.
struct ClassCInstance {
  PriorSpec prior1;
  PriorSpec prior2;
  double w3 = 0.0;
  double w4 = 0.0;

  void validate() const {
    prior1.validate();
    prior2.validate();
    if (w4 < 0.0 || w3 < w4) throw std::invalid_argument("need w3 >= w4 >= 0");
    if (!(prior1.prob_above(w3) > 0.0) || !(prior2.prob_above(w3) > 0.0))
      throw std::invalid_argument("both priors need mass above w3");
    if (!(prior1.effective_weight() > 0.0) || !(prior2.effective_weight() > 0.0))
      throw std::invalid_argument("effective weights must be positive");
  }

  double h1() const { return prior1.effective_weight(); }
  double h2() const { return prior2.effective_weight(); }

  Instance to_instance() const {
    return Instance(2, 1.0, {{w3, 1.0}, {w4, 1.0}}, {prior1, prior2}, 1.0);
  }
};

enum class HeteroPolicyLabel { Pi1, Pi2, Pi12 };

inline const char* hetero_policy_name(HeteroPolicyLabel label) {
  switch (label) {
    case HeteroPolicyLabel::Pi1: return "pi1";
    case HeteroPolicyLabel::Pi2: return "pi2";
    case HeteroPolicyLabel::Pi12: return "pi12";
  }
  return "?";
}

namespace detail {

// Sum of the two largest of {w1, w2, w3, w4}.
inline double max2(double w1, double w2, double w3, double w4) {
  double a[4] = {w1, w2, w3, w4};
  std::sort(a, a + 4);
  return a[2] + a[3];
}

template <typename Fn>
double class_c_expectation(const ClassCInstance& inst, Fn&& term) {
  double acc = 0.0;
  for (const auto& [v1, p1] : inst.prior1.support)
    for (const auto& [v2, p2] : inst.prior2.support) {
      const double m2 = max2(v1, v2, inst.w3, inst.w4);
      const double opt = m2 / (m2 + 1.0);
      acc += p1 * p2 * term(v1, v2, opt);
    }
  return acc;
}

}  // namespace detail

// Exact expectation of the policy's regret over (w1, w2): e.g. for pi1,
// E[(w3/h1 + max(w1,w3)/h2)(OPT-1) + (1/h1 + 1/h2) OPT + 2(OPT-1)].
inline double closed_form_regret(const ClassCInstance& inst, HeteroPolicyLabel label) {
  inst.validate();
  const double h1 = inst.h1();
  const double h2 = inst.h2();
  const double w3 = inst.w3;
  switch (label) {
    case HeteroPolicyLabel::Pi1:
      return detail::class_c_expectation(inst, [&](double w1, double, double opt) {
        return (w3 / h1 + std::max(w1, w3) / h2) * (opt - 1.0) +
               (1.0 / h1 + 1.0 / h2) * opt + 2.0 * (opt - 1.0);
      });
    case HeteroPolicyLabel::Pi2:
      return detail::class_c_expectation(inst, [&](double, double w2, double opt) {
        return (w3 / h2 + std::max(w2, w3) / h1) * (opt - 1.0) +
               (1.0 / h1 + 1.0 / h2) * opt + 2.0 * (opt - 1.0);
      });
    case HeteroPolicyLabel::Pi12:
      return detail::class_c_expectation(inst, [&](double w1, double w2, double opt) {
        const double known_term =
            (h1 * std::max(w1, w3) / h2 + h2 * std::max(w2, w3) / h1) / (h1 + h2);
        const double outside_term = (1.0 + h1 / h2 + h2 / h1) / (h1 + h2);
        return known_term * (opt - 1.0) + outside_term * opt + 2.0 * (opt - 1.0);
      });
  }
  return 0.0;
}

enum class RegretPair { Pi12MinusPi1, Pi12MinusPi2, Pi2MinusPi1 };

// The displayed expectation formulas for the pairwise regret differences.
inline double regret_difference(const ClassCInstance& inst, RegretPair pair) {
  inst.validate();
  const double h1 = inst.h1();
  const double h2 = inst.h2();
  const double w3 = inst.w3;
  switch (pair) {
    case RegretPair::Pi12MinusPi1:
      return detail::class_c_expectation(inst, [&](double w1, double w2, double opt) {
        const double lead =
            h2 / (h1 + h2) * (std::max(w2, w3) / h1 - std::max(w1, w3) / h2) - w3 / h1;
        return lead * (opt - 1.0) - opt / (h1 + h2);
      });
    case RegretPair::Pi12MinusPi2:
      return detail::class_c_expectation(inst, [&](double w1, double w2, double opt) {
        const double lead =
            h1 / (h1 + h2) * (std::max(w1, w3) / h2 - std::max(w2, w3) / h1) - w3 / h2;
        return lead * (opt - 1.0) - opt / (h1 + h2);
      });
    case RegretPair::Pi2MinusPi1:
      return detail::class_c_expectation(inst, [&](double w1, double w2, double opt) {
        return ((w3 / h2 + std::max(w2, w3) / h1) - (w3 / h1 + std::max(w1, w3) / h2)) *
               (opt - 1.0);
      });
  }
  return 0.0;
}

// Two-point priors with a common mean mu: w_i is mu/p_i with probability p_i
// and 0 otherwise, p2 < p1, mapped through the mean.
struct BernoulliLikeParams {
  double mu = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double w3 = 0.0;
  double w4 = 0.0;

  double upside1() const { return mu / p1; }
  double upside2() const { return mu / p2; }

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (!(p1 > 0.0 && p1 < 1.0) || !(p2 > 0.0 && p2 < 1.0))
      throw std::invalid_argument("upside probabilities must lie in (0,1)");
    if (!(p2 < p1)) throw std::invalid_argument("need p2 < p1");
    if (!(w3 > 0.0) || w4 < 0.0) throw std::invalid_argument("incumbent weights invalid");
  }

  // The threshold characterization's standing conditions.
  bool feasible() const {
    return p1 < 1.0 / 6.0 && w3 < mu / p1 && mu / p1 < 2.0 * w3 &&
           std::abs(w4 - w3 / 2.0) <= 1e-12 && w4 > mu && w3 > 4.0;
  }

  PriorSpec prior(int entrant) const {
    const double p = entrant == 1 ? p1 : p2;
    PriorSpec spec;
    spec.support = {{0.0, 1.0 - p}, {mu / p, p}};
    spec.h = HStatistic::mean();
    return spec;
  }

  ClassCInstance to_class_c() const {
    ClassCInstance inst;
    inst.prior1 = prior(1);
    inst.prior2 = prior(2);
    inst.w3 = w3;
    inst.w4 = w4;
    return inst;
  }
};

struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double eval(double x) const { return (a * x + b) * x + c; }
};

// Coefficients of the quadratic Q with sign(Reg(pi2) - Reg(pi1)) =
// sign(-(p2 - p1) Q(p2)) ... specifically Reg(pi2) > Reg(pi1) iff Q(p2) < 0.
inline Quadratic bernoulli_quadratic(const BernoulliLikeParams& params) {
  params.validate();
  const double mu = params.mu, p1 = params.p1, w3 = params.w3;
  const double d1 = p1 * (w3 * (w3 - 2.0 * mu) + w3 - mu) + w3 * mu;
  Quadratic q;
  q.a = mu * p1 * (w3 + 1.0) * (p1 * (w3 + 1.0) + mu) + d1 * (mu + p1);
  q.b = mu * mu * p1 * (p1 * (w3 + 1.0) + mu) + mu * p1 * (w3 - mu / p1) * (mu + p1) +
        mu * p1 * d1;
  q.c = mu * mu * p1 * p1 * (w3 - mu / p1);
  return q;
}

// The unique positive root of the quadratic; lies in (0, p1) under the
// threshold characterization's conditions.
inline double threshold_theta(const BernoulliLikeParams& params) {
  if (!params.feasible())
    throw std::invalid_argument("parameters violate the threshold characterization conditions");
  const Quadratic q = bernoulli_quadratic(params);
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  if (!(q.a > 0.0) || !(disc > 0.0))
    throw std::runtime_error("quadratic is not in the expected sign configuration");
  const double sq = std::sqrt(disc);
  const double shifted = -(q.b + (q.b >= 0.0 ? sq : -sq)) / 2.0;
  const double r1 = shifted / q.a;
  const double r2 = q.c / shifted;
  const double theta = std::max(r1, r2);
  if (!(theta > 0.0 && theta < params.p1))
    throw std::runtime_error("positive root fell outside (0, p1)");
  return theta;
}

// Label with minimal closed-form regret; ties resolve pi1 < pi2 < pi12.
inline HeteroPolicyLabel classify_optimal(const ClassCInstance& inst) {
  HeteroPolicyLabel best = HeteroPolicyLabel::Pi1;
  double best_value = closed_form_regret(inst, HeteroPolicyLabel::Pi1);
  const double r2 = closed_form_regret(inst, HeteroPolicyLabel::Pi2);
  if (r2 < best_value) {
    best = HeteroPolicyLabel::Pi2;
    best_value = r2;
  }
  const double r12 = closed_form_regret(inst, HeteroPolicyLabel::Pi12);
  if (r12 < best_value) best = HeteroPolicyLabel::Pi12;
  return best;
}

}  // namespace mnlx
