#ifndef SCENRED_GA_HPP
#define SCENRED_GA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scenred/evaluation.hpp"
#include "scenred/instance.hpp"

namespace scenred {

/// One gene per link, in ascending link-id order. Need not be feasible.
using Chromosome = std::vector<bool>;

struct GaParams {
  std::size_t population = 50;
  std::size_t generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = -1.0;  // negative: 1 / |E|
  std::size_t tournament = 3;
  std::size_t elitism = 1;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  // Replaces the random initial population when set (its size wins).
  std::optional<std::vector<Chromosome>> initial_population;

  void validate() const;  // throws std::invalid_argument
};

struct GaResult {
  InvestmentPlan plan;
  double value = 0.0;
  std::vector<double> history;  // best-so-far after initialisation and each generation
  std::size_t evaluations = 0;  // distinct decoded plans evaluated
};

/// Scan links in id order, keeping a 1-gene only while the running cost stays
/// within budget. The result is always feasible.
InvestmentPlan decode(const Chromosome& chromosome, const Instance& instance);

double fitness(const Chromosome& chromosome, const Instance& instance, const CompiledSets& sets,
               const Objective& objective);

GaResult run_ga(const Instance& instance, const CompiledSets& sets, const Objective& objective,
                const GaParams& params);

}  // namespace scenred

#endif  // SCENRED_GA_HPP
