#ifndef SCENRED_PATH_SEMANTICS_HPP
#define SCENRED_PATH_SEMANTICS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "scenred/instance.hpp"

namespace scenred {

enum class LinkState : std::uint8_t { Free, Fail, Survive };

/// Per-link realization state, indexed by link index. Links merged as
/// interchangeable during reduction stay Free.
struct PartialAssignment {
  std::vector<LinkState> state;

  explicit PartialAssignment(std::size_t link_count) : state(link_count, LinkState::Free) {}

  LinkState operator[](std::size_t link_index) const { return state[link_index]; }
  void set(std::size_t link_index, LinkState s) { state[link_index] = s; }
};

/// Returned by bound_including when no live allowed path uses the link.
inline constexpr double kNoPath = std::numeric_limits<double>::infinity();

/// Tolerance on the interchangeability test so equal path totals tie.
inline constexpr double kTieEpsilon = 1e-9;

/// A pair's allowed paths compiled against link indices of one instance.
class PathSystem {
 public:
  PathSystem(const Instance& instance, const PairSpec& pair);

  std::size_t link_count() const { return link_count_; }
  std::size_t path_count() const { return paths_.size(); }
  double penalty() const { return penalty_; }
  const std::vector<std::size_t>& path_links(std::size_t path) const { return paths_[path]; }
  double path_length(std::size_t path) const { return lengths_[path]; }
  bool path_contains(std::size_t path, std::size_t link_index) const;
  bool is_relevant(std::size_t link_index) const { return relevant_[link_index]; }
  /// Sorted link indices appearing in some allowed path.
  const std::vector<std::size_t>& relevant_links() const { return relevant_list_; }

 private:
  std::size_t link_count_;
  double penalty_;
  std::vector<std::vector<std::size_t>> paths_;
  std::vector<double> lengths_;
  std::vector<std::vector<bool>> membership_;  // [path][link_index]
  std::vector<bool> relevant_;
  std::vector<std::size_t> relevant_list_;
};

/// Shortest surviving allowed path (m_penalty if none). Throws
/// std::invalid_argument if a relevant link is still Free.
double realized_length(const PathSystem& system, const PartialAssignment& assignment);

/// Shortest surviving allowed path, Free links counted as failed. This is
/// the length of a multiscenario leaf with its "i" entries set to 0.
double surviving_length(const PathSystem& system, const PartialAssignment& assignment);

/// Optimistic length through `link_index`: shortest allowed path containing
/// it with no Fail member (Free and the link itself assumed to survive).
/// kNoPath when there is none.
double bound_including(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index);

/// Pessimistic length avoiding `link_index`: shortest allowed path without it
/// whose members all Survive (Free assumed failed); m_penalty when none.
double bound_excluding(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index);

/// True when the link's value cannot change the shortest path length in any
/// completion of `assignment`.
bool is_interchangeable(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index);

}  // namespace scenred

#endif  // SCENRED_PATH_SEMANTICS_HPP
