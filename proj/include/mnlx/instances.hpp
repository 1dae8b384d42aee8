#pragma once
// Constructors for the named instance families used by the experiment suite.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mnlx/core.hpp"
#include "mnlx/hetero.hpp"

namespace mnlx {

inline PriorSpec bernoulli_prior(double q) {
  PriorSpec spec;
  spec.support = {{0.0, 1.0 - q}, {1.0, q}};
  spec.h = HStatistic::mean();
  spec.validate();
  return spec;
}

// I(c, q): c Bern(q) entrants, c/2 incumbents at 0.9 and c/2 at 2q, mean
// mapping, unit rewards, w0 = 1.
inline Instance make_instance_I(int c, double q) {
  if (c < 1) throw std::invalid_argument("I(c,q): c must be positive");
  if (c % 2 != 0) throw std::invalid_argument("I(c,q): c must be even (c/2 incumbents per tier)");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("I(c,q): q must lie in (0,1)");
  std::vector<ProductEntry> incumbents;
  for (int i = 0; i < c / 2; ++i) incumbents.push_back({0.9, 1.0});
  for (int i = 0; i < c / 2; ++i) incumbents.push_back({2.0 * q, 1.0});
  std::vector<PriorSpec> priors(c, bernoulli_prior(q));
  return Instance(c, 1.0, std::move(incumbents), std::move(priors), 1.0);
}

// J(m, c, q, delta): m Bern(q) entrants, c incumbents at q + delta.
inline Instance make_instance_J(int m, int c, double q, double delta) {
  if (m < 1) throw std::invalid_argument("J: m must be positive");
  if (c < 1) throw std::invalid_argument("J: c must be positive");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("J: q must lie in (0,1)");
  if (!(q + delta > 0.0 && q + delta < 1.0))
    throw std::invalid_argument("J: q + delta must lie in (0,1)");
  std::vector<ProductEntry> incumbents(c, {q + delta, 1.0});
  std::vector<PriorSpec> priors(m, bernoulli_prior(q));
  return Instance(c, 1.0, std::move(incumbents), std::move(priors), 1.0);
}

// Bernoulli-like two-entrant instance: upsides mu/p_i, incumbents w3 and w4,
// capacity 2, mean mapping.
inline Instance make_bernoulli_like(double mu, double p1, double p2, double w3, double w4) {
  BernoulliLikeParams params{mu, p1, p2, w3, w4};
  params.validate();
  return params.to_class_c().to_instance();
}

inline std::string format_instance_id(const std::string& name, const std::string& args) {
  std::ostringstream os;
  os << name << "(" << args << ")";
  return os.str();
}

}  // namespace mnlx
