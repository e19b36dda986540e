#include "scenred/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace scenred::oracle {

namespace {

const PairSpec& pair_at(const Instance& instance, std::size_t pair_index) {
  if (pair_index >= instance.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair_index));
  return instance.pairs[pair_index];
}

std::vector<double> survival(const Instance& instance, const InvestmentPlan& plan) {
  if (plan.size() != instance.link_count())
    throw ValidationError(fmt::format("plan has {} entries, instance has {} links", plan.size(), instance.link_count()));
  std::vector<double> s;
  for (std::size_t i = 0; i < plan.size(); ++i) s.push_back(plan.invest[i] ? instance.links[i].q : instance.links[i].p);
  return s;
}

}  // namespace

RelevantLinkSet relevant_link_set(const Instance& instance, std::size_t pair_index) {
  return {pair_index, pair_at(instance, pair_index).relevant_links()};
}

double scenario_length(const PairSpec& pair, const Instance& instance, const std::vector<bool>& survives) {
  double best = pair.m_penalty;
  for (const auto& path : pair.allowed_paths) {
    bool alive = true;
    for (LinkId id : path.links) alive = alive && survives[instance.index_of(id)];
    if (alive && path.length < best) best = path.length;
  }
  return best;
}

std::vector<LengthAtom> brute_force_distribution(const Instance& instance, std::size_t pair_index,
                                                 const InvestmentPlan& plan) {
  const PairSpec& pair = pair_at(instance, pair_index);
  const auto relevant = pair.relevant_links();
  if (relevant.size() > kMaxRelevantLinks)
    throw std::length_error(fmt::format("pair {} has {} relevant links; brute force is limited to {}", pair_index,
                                        relevant.size(), kMaxRelevantLinks));
  const auto s = survival(instance, plan);
  std::vector<std::size_t> idx;
  for (LinkId id : relevant) idx.push_back(instance.index_of(id));

  // Links outside the relevant set are fixed to "fails"; they never appear
  // in an allowed path.
  std::vector<bool> survives(instance.link_count(), false);
  const std::uint64_t count = std::uint64_t{1} << idx.size();
  std::vector<LengthAtom> atoms;
  atoms.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const bool up = (mask >> b) & 1U;
      survives[idx[b]] = up;
      prob *= up ? s[idx[b]] : 1.0 - s[idx[b]];
    }
    atoms.push_back({scenario_length(pair, instance, survives), prob});
  }
  return atoms;
}

double brute_force_expected(const Instance& instance, std::size_t pair_index, const InvestmentPlan& plan) {
  double sum = 0.0;
  for (const auto& a : brute_force_distribution(instance, pair_index, plan)) sum += a.probability * a.length;
  return sum;
}

double brute_force_value(const Instance& instance, const InvestmentPlan& plan, const Objective& objective) {
  objective.validate();
  const auto weights = pair_weights(instance, objective);
  double z = 0.0;
  for (std::size_t i = 0; i < instance.pairs.size(); ++i) {
    const double stat = objective.kind == ObjectiveKind::Expectation
                            ? brute_force_expected(instance, i, plan)
                            : cvar_of(brute_force_distribution(instance, i, plan), objective.alpha);
    z += weights[i] * stat;
  }
  return z;
}

std::vector<InvestmentPlan> maximal_plans(const Instance& instance, std::size_t limit) {
  const std::size_t n = instance.link_count();
  const double budget = instance.budget + 1e-9;
  std::vector<double> suffix_cost(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix_cost[i] = suffix_cost[i + 1] + instance.links[i].cost;

  std::vector<InvestmentPlan> plans;
  InvestmentPlan current{std::vector<bool>(n, false)};
  // A plan is maximal iff every excluded link would overshoot the budget,
  // i.e. final cost > budget - (cheapest excluded cost).
  auto dfs = [&](auto&& self, std::size_t i, double cost, double min_excluded) -> void {
    if (cost + suffix_cost[i] <= budget - min_excluded) return;
    if (i == n) {
      if (plans.size() == limit)
        throw std::length_error(fmt::format("more than {} maximal plans; exhaustive search refused", limit));
      plans.push_back(current);
      return;
    }
    const double c = instance.links[i].cost;
    self(self, i + 1, cost, std::min(min_excluded, c));
    if (cost + c <= budget) {
      current.invest[i] = true;
      self(self, i + 1, cost + c, min_excluded);
      current.invest[i] = false;
    }
  };
  dfs(dfs, 0, 0.0, std::numeric_limits<double>::infinity());
  return plans;
}

std::pair<InvestmentPlan, double> brute_force_optimal(const Instance& instance, const Objective& objective) {
  instance.require_probabilities();
  const auto plans = maximal_plans(instance);
  std::pair<InvestmentPlan, double> best{InvestmentPlan{}, std::numeric_limits<double>::infinity()};
  // Plans arrive in increasing string order, so a strict improvement test
  // keeps the lexicographically smallest among ties.
  for (const auto& plan : plans) {
    const double v = brute_force_value(instance, plan, objective);
    if (v < best.second - 1e-12) best = {plan, v};
  }
  return best;
}

MonteCarloResult monte_carlo_estimate(const Instance& instance, const InvestmentPlan& plan, const Objective& objective,
                                      std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("monte_carlo_estimate: samples must be positive");
  if (objective.kind != ObjectiveKind::Expectation)
    throw std::invalid_argument("monte_carlo_estimate supports the expectation objective only");
  objective.validate();
  const auto s = survival(instance, plan);
  const auto weights = pair_weights(instance, objective);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<bool> survives(instance.link_count());
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < s.size(); ++i) survives[i] = unit(rng) < s[i];
    double z = 0.0;
    for (std::size_t p = 0; p < instance.pairs.size(); ++p)
      z += weights[p] * scenario_length(instance.pairs[p], instance, survives);
    const double delta = z - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (z - mean);
  }
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace scenred::oracle
