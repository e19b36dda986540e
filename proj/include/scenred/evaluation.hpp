#ifndef SCENRED_EVALUATION_HPP
#define SCENRED_EVALUATION_HPP

#include <span>
#include <string>
#include <vector>

#include "scenred/instance.hpp"
#include "scenred/reduction.hpp"

namespace scenred {

enum class ObjectiveKind { Expectation, CVaR };

/// Per-pair statistic combined as a weighted sum over pairs. Empty `weights`
/// means "use the instance's pair weights".
struct Objective {
  ObjectiveKind kind = ObjectiveKind::Expectation;
  double alpha = 0.9;
  std::vector<double> weights;

  static Objective expectation() { return {}; }
  static Objective cvar(double alpha) { return {ObjectiveKind::CVaR, alpha, {}}; }

  /// Throws std::invalid_argument on alpha outside (0,1) or negative weights.
  void validate() const;
  std::string describe() const;
};

struct LengthAtom {
  double length;
  double probability;
};

/// Discrete length distribution of one pair under a plan (one atom per row).
std::vector<LengthAtom> length_distribution(const MultiscenarioSet& set, const Instance& instance,
                                            const InvestmentPlan& plan);

double expected_length(const MultiscenarioSet& set, const Instance& instance, const InvestmentPlan& plan);

/// Expected length over the worst (1 - alpha) probability tail; the atom on
/// the tail boundary contributes fractionally.
double cvar_of(std::vector<LengthAtom> distribution, double alpha);
double cvar(const MultiscenarioSet& set, const Instance& instance, const InvestmentPlan& plan, double alpha);

/// Weighted sum of per-pair expectations or CVaRs. `sets[i]` must be the set
/// of pair i. Throws ValidationError for a plan over budget.
double objective_value(std::span<const MultiscenarioSet> sets, const Instance& instance, const InvestmentPlan& plan,
                       const Objective& objective);

/// Reduction sets compiled for fast repeated evaluation: each row keeps only
/// its 0/1 entries as (link index, survives) pairs.
class CompiledSets {
 public:
  CompiledSets(std::span<const MultiscenarioSet> sets, const Instance& instance);

  std::size_t pair_count() const { return pairs_.size(); }
  std::size_t total_rows() const;
  std::vector<LengthAtom> distribution(std::size_t pair, std::span<const double> survival) const;
  double expectation(std::size_t pair, std::span<const double> survival) const;
  /// Objective without the budget check (callers decode first).
  double value(std::span<const double> survival, const Objective& objective,
               std::span<const double> pair_weights) const;

 private:
  struct Row {
    std::vector<std::pair<std::size_t, bool>> fixed;
    double length;
  };
  std::vector<std::vector<Row>> pairs_;
};

std::vector<double> pair_weights(const Instance& instance, const Objective& objective);

struct PairReport {
  std::size_t pair_index;
  NodeId source;
  NodeId sink;
  double weight;
  std::size_t rows;
  double expectation;
  double cvar;  // NaN unless the objective is CVaR
};

struct EvaluationReport {
  std::vector<PairReport> pairs;
  Objective objective;
  double value = 0.0;
  std::string plan;
  double cost = 0.0;
  double budget = 0.0;
};

EvaluationReport evaluate_plan(std::span<const MultiscenarioSet> sets, const Instance& instance,
                               const InvestmentPlan& plan, const Objective& objective);

/// Fixed-column table followed by key=value lines.
std::string format_report(const EvaluationReport& report);

}  // namespace scenred

#endif  // SCENRED_EVALUATION_HPP
