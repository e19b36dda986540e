#include "scenred/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace scenred {

void Objective::validate() const {
  if (kind == ObjectiveKind::CVaR && !(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(fmt::format("CVaR alpha {} outside (0,1)", alpha));
  for (double w : weights)
    if (!(w >= 0.0)) throw std::invalid_argument("objective weights must be nonnegative");
}

std::string Objective::describe() const {
  return kind == ObjectiveKind::Expectation ? std::string("expectation") : fmt::format("cvar(alpha={})", alpha);
}

std::vector<LengthAtom> length_distribution(const MultiscenarioSet& set, const Instance& instance,
                                            const InvestmentPlan& plan) {
  const auto order = permutation_indices(instance, set.permutation);
  const auto survival = survival_probabilities(instance, plan);
  std::vector<LengthAtom> atoms;
  atoms.reserve(set.rows.size());
  for (const auto& row : set.rows) atoms.push_back({row.length, row_probability(row, order, survival)});
  return atoms;
}

double expected_length(const MultiscenarioSet& set, const Instance& instance, const InvestmentPlan& plan) {
  double sum = 0.0;
  for (const auto& atom : length_distribution(set, instance, plan)) sum += atom.probability * atom.length;
  return sum;
}

double cvar_of(std::vector<LengthAtom> distribution, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(fmt::format("CVaR alpha {} outside (0,1)", alpha));
  double total = 0.0;
  for (const auto& a : distribution) total += a.probability;
  if (!(total > 0.0)) throw std::invalid_argument("CVaR of a distribution with zero mass");

  // Stable sort keeps equal lengths in row order, so the result is reproducible.
  std::stable_sort(distribution.begin(), distribution.end(),
                   [](const LengthAtom& a, const LengthAtom& b) { return a.length > b.length; });
  const double tail = (1.0 - alpha) * total;
  double taken = 0.0;
  double acc = 0.0;
  for (const auto& a : distribution) {
    if (taken >= tail) break;
    const double share = std::min(a.probability, tail - taken);
    if (share <= 0.0) continue;  // zero-probability rows, e.g. an invested link failing
    acc += share * a.length;
    taken += share;
  }
  return acc / tail;
}

double cvar(const MultiscenarioSet& set, const Instance& instance, const InvestmentPlan& plan, double alpha) {
  return cvar_of(length_distribution(set, instance, plan), alpha);
}

std::vector<double> pair_weights(const Instance& instance, const Objective& objective) {
  if (objective.weights.empty()) {
    std::vector<double> w;
    for (const auto& p : instance.pairs) w.push_back(p.weight);
    return w;
  }
  if (objective.weights.size() != instance.pairs.size())
    throw std::invalid_argument(fmt::format("objective has {} weights, instance has {} pairs",
                                            objective.weights.size(), instance.pairs.size()));
  return objective.weights;
}

namespace {

void check_sets(std::span<const MultiscenarioSet> sets, const Instance& instance) {
  if (sets.size() != instance.pairs.size())
    throw ValidationError(fmt::format("{} multiscenario sets given for {} pairs", sets.size(), instance.pairs.size()));
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].pair_index != i) throw ValidationError(fmt::format("set {} belongs to pair {}", i, sets[i].pair_index));
}

void check_budget(const Instance& instance, const InvestmentPlan& plan) {
  const double cost = plan_cost(plan, instance);
  if (cost > instance.budget + 1e-9)
    throw ValidationError(fmt::format("plan {} costs {} which exceeds the budget {}", format_plan(plan), cost,
                                      instance.budget));
}

}  // namespace

double objective_value(std::span<const MultiscenarioSet> sets, const Instance& instance, const InvestmentPlan& plan,
                       const Objective& objective) {
  objective.validate();
  check_sets(sets, instance);
  check_budget(instance, plan);
  const auto weights = pair_weights(instance, objective);
  double z = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double stat = objective.kind == ObjectiveKind::Expectation
                            ? expected_length(sets[i], instance, plan)
                            : cvar(sets[i], instance, plan, objective.alpha);
    z += weights[i] * stat;
  }
  return z;
}

CompiledSets::CompiledSets(std::span<const MultiscenarioSet> sets, const Instance& instance) {
  check_sets(sets, instance);
  for (const auto& set : sets) {
    const auto order = permutation_indices(instance, set.permutation);
    std::vector<Row> rows;
    rows.reserve(set.rows.size());
    for (const auto& ms : set.rows) {
      Row row{{}, ms.length};
      for (std::size_t pos = 0; pos < ms.values.size(); ++pos)
        if (ms.values[pos] != Symbol::Any) row.fixed.emplace_back(order[pos], ms.values[pos] == Symbol::Survive);
      rows.push_back(std::move(row));
    }
    pairs_.push_back(std::move(rows));
  }
}

std::size_t CompiledSets::total_rows() const {
  std::size_t n = 0;
  for (const auto& rows : pairs_) n += rows.size();
  return n;
}

std::vector<LengthAtom> CompiledSets::distribution(std::size_t pair, std::span<const double> survival) const {
  std::vector<LengthAtom> atoms;
  atoms.reserve(pairs_[pair].size());
  for (const auto& row : pairs_[pair]) {
    double prob = 1.0;
    for (auto [link, survives] : row.fixed) prob *= survives ? survival[link] : 1.0 - survival[link];
    atoms.push_back({row.length, prob});
  }
  return atoms;
}

double CompiledSets::expectation(std::size_t pair, std::span<const double> survival) const {
  double sum = 0.0;
  for (const auto& row : pairs_[pair]) {
    double prob = 1.0;
    for (auto [link, survives] : row.fixed) prob *= survives ? survival[link] : 1.0 - survival[link];
    sum += prob * row.length;
  }
  return sum;
}

double CompiledSets::value(std::span<const double> survival, const Objective& objective,
                           std::span<const double> weights) const {
  double z = 0.0;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const double stat = objective.kind == ObjectiveKind::Expectation
                            ? expectation(i, survival)
                            : cvar_of(distribution(i, survival), objective.alpha);
    z += weights[i] * stat;
  }
  return z;
}

EvaluationReport evaluate_plan(std::span<const MultiscenarioSet> sets, const Instance& instance,
                               const InvestmentPlan& plan, const Objective& objective) {
  EvaluationReport report;
  report.objective = objective;
  report.value = objective_value(sets, instance, plan, objective);
  report.plan = format_plan(plan);
  report.cost = plan_cost(plan, instance);
  report.budget = instance.budget;
  const auto weights = pair_weights(instance, objective);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& pair = instance.pairs[i];
    PairReport pr{i, pair.source, pair.sink, weights[i], sets[i].size(), expected_length(sets[i], instance, plan),
                  std::numeric_limits<double>::quiet_NaN()};
    if (objective.kind == ObjectiveKind::CVaR) pr.cvar = cvar(sets[i], instance, plan, objective.alpha);
    report.pairs.push_back(pr);
  }
  return report;
}

std::string format_report(const EvaluationReport& r) {
  const bool with_cvar = r.objective.kind == ObjectiveKind::CVaR;
  std::string out = fmt::format("{:>4}  {:>6}  {:>6}  {:>8}  {:>6}  {:>12}", "pair", "source", "sink", "weight",
                                "rows", "expectation");
  if (with_cvar) out += fmt::format("  {:>12}", "cvar");
  out += '\n';
  for (const auto& p : r.pairs) {
    out += fmt::format("{:>4}  {:>6}  {:>6}  {:>8.4f}  {:>6}  {:>12.6f}", p.pair_index, p.source, p.sink, p.weight,
                       p.rows, p.expectation);
    if (with_cvar) out += fmt::format("  {:>12.6f}", p.cvar);
    out += '\n';
  }
  out += fmt::format("objective {} = {:.6f}\n", r.objective.describe(), r.value);
  out += fmt::format("plan {}  cost {}  budget {}  slack {}\n\n", r.plan, r.cost, r.budget, r.budget - r.cost);

  for (const auto& p : r.pairs) {
    out += fmt::format("pair.{}.expectation={:.12g}\n", p.pair_index, p.expectation);
    if (with_cvar) out += fmt::format("pair.{}.cvar={:.12g}\n", p.pair_index, p.cvar);
    out += fmt::format("pair.{}.rows={}\n", p.pair_index, p.rows);
  }
  out += fmt::format("objective={:.12g}\n", r.value);
  out += fmt::format("plan={}\ncost={}\nbudget={}\nslack={}\n", r.plan, r.cost, r.budget, r.budget - r.cost);
  return out;
}

}  // namespace scenred
