#ifndef SCENRED_PERMUTATION_SEARCH_HPP
#define SCENRED_PERMUTATION_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "scenred/instance.hpp"
#include "scenred/reduction.hpp"

namespace scenred {

struct PermSearchParams {
  std::uint64_t seed = 1;
  std::size_t max_iterations = 50000;  // evaluated moves per restart
  std::size_t sideways_limit = 0;      // consecutive equal-size moves; 0 means 10 * |E|
  std::size_t restarts = 4;
  unsigned jobs = 1;
  std::optional<std::vector<LinkId>> initial;  // default: heuristic_permutation

  void validate() const;  // throws std::invalid_argument
};

struct PermSearchResult {
  std::vector<LinkId> permutation;
  MultiscenarioSet set;
  std::size_t initial_size = 0;
  std::size_t best_restart = 0;
  std::size_t evaluations = 0;
  /// history[r][k]: best size seen by restart r after k evaluated moves
  /// (entry 0 is the restart's starting size).
  std::vector<std::vector<std::size_t>> history;
};

/// Relevant links first, ordered by the length of the shortest allowed path
/// through each (ties by id), then the remaining links by id.
std::vector<LinkId> heuristic_permutation(const Instance& instance, std::size_t pair_index);

/// Hill climbing over link permutations with random 2-exchange (swap) and
/// 3-exchange (cyclic rotation) moves, accepting non-worsening moves. A run
/// of `sideways_limit` equal-size moves triggers a jump to a fresh random
/// permutation. Restarts use seeds derived from `params.seed`; the smallest
/// set wins, ties to the lowest restart index.
PermSearchResult optimize_permutation(const Instance& instance, std::size_t pair_index,
                                      const PermSearchParams& params);

/// Min and max set size over all |E|! permutations. |E| must be at most 8.
std::pair<std::size_t, std::size_t> exhaustive_best(const Instance& instance, std::size_t pair_index);

}  // namespace scenred

#endif  // SCENRED_PERMUTATION_SEARCH_HPP
