#include "scenred/permutation_search.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace scenred {

void PermSearchParams::validate() const {
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
  if (restarts == 0) throw std::invalid_argument("restarts must be at least 1");
}

std::vector<LinkId> heuristic_permutation(const Instance& instance, std::size_t pair_index) {
  if (pair_index >= instance.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair_index));
  const PairSpec& pair = instance.pairs[pair_index];
  std::vector<std::pair<double, LinkId>> relevant;
  for (LinkId id : pair.relevant_links()) {
    double best = kNoPath;
    for (const auto& path : pair.allowed_paths)
      if (path.contains(id)) best = std::min(best, path.length);
    relevant.emplace_back(best, id);
  }
  std::sort(relevant.begin(), relevant.end());
  std::vector<LinkId> perm;
  for (auto [len, id] : relevant) perm.push_back(id);
  for (const auto& link : instance.links)
    if (std::find(perm.begin(), perm.end(), link.id) == perm.end()) perm.push_back(link.id);
  return perm;
}

namespace {

struct ClimbResult {
  std::vector<std::size_t> best_order;
  std::size_t best_size;
  std::size_t evaluations = 0;
  std::vector<std::size_t> history;
};

ClimbResult climb(const PathSystem& system, std::vector<std::size_t> order, std::uint64_t seed,
                  std::size_t restart, const PermSearchParams& params, std::size_t sideways_limit) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  const std::size_t n = order.size();
  if (restart > 0) std::shuffle(order.begin(), order.end(), rng);

  std::size_t current = count_multiscenarios(system, order);
  ClimbResult result{order, current, 0, {current}};
  result.history.reserve(params.max_iterations + 1);
  if (n < 2) {
    result.history.resize(params.max_iterations + 1, current);
    result.evaluations = params.max_iterations;
    return result;
  }

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::bernoulli_distribution use_three(n >= 3 ? 0.5 : 0.0);
  std::bernoulli_distribution rotate_left(0.5);
  std::size_t sideways = 0;
  std::vector<std::size_t> candidate;

  for (std::size_t it = 0; it < params.max_iterations; ++it) {
    candidate = order;
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    if (use_three(rng)) {
      std::size_t c = pick(rng);
      while (c == a || c == b) c = pick(rng);
      // Cyclic rotation of the three chosen positions.
      if (rotate_left(rng)) {
        candidate[a] = order[b];
        candidate[b] = order[c];
        candidate[c] = order[a];
      } else {
        candidate[a] = order[c];
        candidate[b] = order[a];
        candidate[c] = order[b];
      }
    } else {
      std::swap(candidate[a], candidate[b]);
    }

    const std::size_t size = count_multiscenarios(system, candidate, current);
    ++result.evaluations;
    if (size <= current) {
      sideways = size == current ? sideways + 1 : 0;
      order.swap(candidate);
      current = size;
      if (current < result.best_size) {
        result.best_size = current;
        result.best_order = order;
      }
      if (sideways >= sideways_limit) {
        std::shuffle(order.begin(), order.end(), rng);
        current = count_multiscenarios(system, order);
        sideways = 0;
        if (current < result.best_size) {
          result.best_size = current;
          result.best_order = order;
        }
      }
    }
    result.history.push_back(result.best_size);
  }
  return result;
}

}  // namespace

PermSearchResult optimize_permutation(const Instance& instance, std::size_t pair_index,
                                      const PermSearchParams& params) {
  params.validate();
  if (pair_index >= instance.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair_index));
  const PathSystem system(instance, instance.pairs[pair_index]);
  const auto start = params.initial ? *params.initial : heuristic_permutation(instance, pair_index);
  const auto start_order = permutation_indices(instance, start);
  const std::size_t sideways_limit = params.sideways_limit ? params.sideways_limit : 10 * instance.link_count();

  std::vector<ClimbResult> climbs(params.restarts);
  if (params.jobs <= 1) {
    for (std::size_t r = 0; r < params.restarts; ++r)
      climbs[r] = climb(system, start_order, params.seed, r, params, sideways_limit);
  } else {
    for (std::size_t first = 0; first < params.restarts; first += params.jobs) {
      std::vector<std::future<ClimbResult>> batch;
      const std::size_t last = std::min<std::size_t>(params.restarts, first + params.jobs);
      for (std::size_t r = first; r < last; ++r)
        batch.push_back(std::async(std::launch::async,
                                   [&, r] { return climb(system, start_order, params.seed, r, params, sideways_limit); }));
      for (std::size_t r = first; r < last; ++r) climbs[r] = batch[r - first].get();
    }
  }

  PermSearchResult result;
  result.initial_size = climbs.front().history.front();
  for (std::size_t r = 0; r < climbs.size(); ++r) {
    result.evaluations += climbs[r].evaluations;
    if (r == 0 || climbs[r].best_size < climbs[result.best_restart].best_size) result.best_restart = r;
  }
  const auto& best = climbs[result.best_restart];
  for (std::size_t idx : best.best_order) result.permutation.push_back(instance.links[idx].id);
  for (auto& c : climbs) result.history.push_back(std::move(c.history));
  result.set = reduce(instance, pair_index, result.permutation);
  return result;
}

std::pair<std::size_t, std::size_t> exhaustive_best(const Instance& instance, std::size_t pair_index) {
  if (instance.link_count() > 8)
    throw std::invalid_argument(fmt::format("exhaustive_best: {} links exceeds the limit of 8", instance.link_count()));
  if (pair_index >= instance.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair_index));
  const PathSystem system(instance, instance.pairs[pair_index]);
  std::vector<std::size_t> order(instance.link_count());
  std::iota(order.begin(), order.end(), 0);
  std::size_t lo = SIZE_MAX, hi = 0;
  do {
    const std::size_t size = count_multiscenarios(system, order);
    lo = std::min(lo, size);
    hi = std::max(hi, size);
  } while (std::next_permutation(order.begin(), order.end()));
  return {lo, hi};
}

}  // namespace scenred
