#ifndef SCENRED_ORACLE_HPP
#define SCENRED_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "scenred/evaluation.hpp"
#include "scenred/instance.hpp"

// Reference evaluators that share only the instance model with the reduction
// engine: path lengths are recomputed here by a direct scan over allowed
// paths on fully realized scenarios.
namespace scenred::oracle {

inline constexpr std::size_t kMaxRelevantLinks = 25;
inline constexpr std::size_t kMaxMaximalPlans = std::size_t{1} << 20;

struct RelevantLinkSet {
  std::size_t pair_index;
  std::vector<LinkId> links;  // sorted
};

RelevantLinkSet relevant_link_set(const Instance& instance, std::size_t pair_index);

/// Shortest surviving allowed path for a complete scenario given as one
/// survival flag per link index; m_penalty if none survives.
double scenario_length(const PairSpec& pair, const Instance& instance, const std::vector<bool>& survives);

/// Every completion of the pair's relevant links with its probability.
std::vector<LengthAtom> brute_force_distribution(const Instance& instance, std::size_t pair_index,
                                                 const InvestmentPlan& plan);
double brute_force_expected(const Instance& instance, std::size_t pair_index, const InvestmentPlan& plan);
double brute_force_value(const Instance& instance, const InvestmentPlan& plan, const Objective& objective);

/// Budget-feasible plans to which no further link can be added within budget,
/// in lexicographic 0/1-string order. Throws std::length_error beyond `limit`.
std::vector<InvestmentPlan> maximal_plans(const Instance& instance, std::size_t limit = kMaxMaximalPlans);

/// Exhaustive search over maximal plans; ties go to the lexicographically
/// smallest 0/1 string.
std::pair<InvestmentPlan, double> brute_force_optimal(const Instance& instance, const Objective& objective);

struct MonteCarloResult {
  double estimate;
  double standard_error;
  std::size_t samples;
};

/// I.i.d. scenario sampling of the weighted expected length. Only the
/// expectation objective is supported.
MonteCarloResult monte_carlo_estimate(const Instance& instance, const InvestmentPlan& plan, const Objective& objective,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace scenred::oracle

#endif  // SCENRED_ORACLE_HPP
