#include "scenred/ga.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace scenred {

void GaParams::validate() const {
  if (population < 2 && !initial_population) throw std::invalid_argument("population must be at least 2");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) throw std::invalid_argument("crossover rate outside [0,1]");
  if (mutation_rate > 1.0) throw std::invalid_argument("mutation rate outside [0,1]");
  if (tournament == 0) throw std::invalid_argument("tournament size must be positive");
  const std::size_t pop = initial_population ? initial_population->size() : population;
  if (pop < 2) throw std::invalid_argument("population must be at least 2");
  if (elitism >= pop) throw std::invalid_argument("elitism must be smaller than the population");
}

InvestmentPlan decode(const Chromosome& chromosome, const Instance& instance) {
  if (chromosome.size() != instance.link_count())
    throw ValidationError(fmt::format("chromosome has {} genes, instance has {} links", chromosome.size(),
                                      instance.link_count()));
  InvestmentPlan plan{std::vector<bool>(chromosome.size(), false)};
  double cost = 0.0;
  for (std::size_t i = 0; i < chromosome.size(); ++i) {
    if (!chromosome[i]) continue;
    const double c = instance.links[i].cost;
    if (cost + c <= instance.budget + 1e-9) {
      plan.invest[i] = true;
      cost += c;
    }
  }
  return plan;
}

double fitness(const Chromosome& chromosome, const Instance& instance, const CompiledSets& sets,
               const Objective& objective) {
  const auto plan = decode(chromosome, instance);
  const auto weights = pair_weights(instance, objective);
  return sets.value(survival_probabilities(instance, plan), objective, weights);
}

namespace {

class FitnessCache {
 public:
  FitnessCache(const Instance& instance, const CompiledSets& sets, const Objective& objective, unsigned jobs)
      : instance_(instance), sets_(sets), objective_(objective), weights_(pair_weights(instance, objective)),
        jobs_(std::max(1U, jobs)) {}

  /// Fitness for each chromosome; new decoded plans are evaluated in parallel.
  std::vector<double> evaluate(const std::vector<Chromosome>& population) {
    std::vector<std::vector<bool>> keys;
    keys.reserve(population.size());
    std::vector<std::vector<bool>> pending;
    for (const auto& c : population) {
      keys.push_back(decode(c, instance_).invest);
      if (!cache_.contains(keys.back()) &&
          std::find(pending.begin(), pending.end(), keys.back()) == pending.end())
        pending.push_back(keys.back());
    }
    std::vector<double> values(pending.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k)
        values[k] = sets_.value(survival_probabilities(instance_, InvestmentPlan{pending[k]}), objective_, weights_);
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs_, pending.size()));
    if (workers <= 1) {
      work(0, pending.size());
    } else {
      std::vector<std::jthread> threads;
      const std::size_t chunk = (pending.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(pending.size(), begin + chunk);
        if (begin < end) threads.emplace_back(work, begin, end);
      }
    }
    for (std::size_t k = 0; k < pending.size(); ++k) cache_.emplace(pending[k], values[k]);

    std::vector<double> out;
    out.reserve(keys.size());
    for (const auto& key : keys) out.push_back(cache_.at(key));
    return out;
  }

  std::size_t size() const { return cache_.size(); }

 private:
  const Instance& instance_;
  const CompiledSets& sets_;
  const Objective& objective_;
  std::vector<double> weights_;
  unsigned jobs_;
  std::map<std::vector<bool>, double> cache_;
};

}  // namespace

GaResult run_ga(const Instance& instance, const CompiledSets& sets, const Objective& objective,
                const GaParams& params) {
  params.validate();
  objective.validate();
  instance.require_probabilities();
  const std::size_t n = instance.link_count();
  const double mutation = params.mutation_rate < 0.0 ? 1.0 / static_cast<double>(n) : params.mutation_rate;

  std::mt19937_64 rng(params.seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution do_cross(params.crossover_rate);
  std::bernoulli_distribution flip(mutation);

  std::vector<Chromosome> population;
  if (params.initial_population) {
    population = *params.initial_population;
    for (const auto& c : population)
      if (c.size() != n) throw std::invalid_argument("initial chromosome length differs from the link count");
  } else {
    population.assign(params.population, Chromosome(n));
    for (auto& c : population)
      for (std::size_t i = 0; i < n; ++i) c[i] = coin(rng);
  }
  const std::size_t pop = population.size();
  std::uniform_int_distribution<std::size_t> pick(0, pop - 1);

  FitnessCache cache(instance, sets, objective, params.jobs);
  std::vector<double> fit = cache.evaluate(population);

  GaResult result;
  result.value = std::numeric_limits<double>::infinity();
  auto track_best = [&] {
    for (std::size_t k = 0; k < pop; ++k) {
      if (fit[k] < result.value) {
        result.value = fit[k];
        result.plan = decode(population[k], instance);
      }
    }
    result.history.push_back(result.value);
  };
  track_best();

  auto tournament = [&]() -> const Chromosome& {
    std::size_t best = pick(rng);
    for (std::size_t t = 1; t < params.tournament; ++t) {
      const std::size_t other = pick(rng);
      if (fit[other] < fit[best]) best = other;
    }
    return population[best];
  };

  std::vector<std::size_t> ranking(pop);
  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    std::iota(ranking.begin(), ranking.end(), 0);
    std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

    std::vector<Chromosome> next;
    next.reserve(pop);
    for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(population[ranking[e]]);
    while (next.size() < pop) {
      const Chromosome& a = tournament();
      const Chromosome& b = tournament();
      Chromosome child = a;
      if (do_cross(rng))
        for (std::size_t i = 0; i < n; ++i) child[i] = coin(rng) ? a[i] : b[i];
      for (std::size_t i = 0; i < n; ++i)
        if (flip(rng)) child[i] = !child[i];
      next.push_back(std::move(child));
    }
    population = std::move(next);
    fit = cache.evaluate(population);
    track_best();
  }
  result.evaluations = cache.size();
  return result;
}

}  // namespace scenred
