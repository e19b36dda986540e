#include "scenred/path_semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace scenred {

PathSystem::PathSystem(const Instance& instance, const PairSpec& pair)
    : link_count_(instance.link_count()),
      penalty_(pair.m_penalty),
      relevant_(instance.link_count(), false) {
  for (const auto& path : pair.allowed_paths) {
    std::vector<std::size_t> members;
    std::vector<bool> mask(link_count_, false);
    for (LinkId id : path.links) {
      const std::size_t idx = instance.index_of(id);
      members.push_back(idx);
      mask[idx] = true;
      relevant_[idx] = true;
    }
    paths_.push_back(std::move(members));
    lengths_.push_back(path.length);
    membership_.push_back(std::move(mask));
  }
  for (std::size_t i = 0; i < link_count_; ++i)
    if (relevant_[i]) relevant_list_.push_back(i);
}

bool PathSystem::path_contains(std::size_t path, std::size_t link_index) const {
  return membership_[path][link_index];
}

double surviving_length(const PathSystem& system, const PartialAssignment& assignment) {
  double best = system.penalty();
  for (std::size_t p = 0; p < system.path_count(); ++p) {
    const auto& members = system.path_links(p);
    const bool alive = std::all_of(members.begin(), members.end(),
                                   [&](std::size_t l) { return assignment[l] == LinkState::Survive; });
    if (alive) best = std::min(best, system.path_length(p));
  }
  return best;
}

double realized_length(const PathSystem& system, const PartialAssignment& assignment) {
  for (std::size_t l : system.relevant_links())
    if (assignment[l] == LinkState::Free)
      throw std::invalid_argument("realized_length: a relevant link is unassigned");
  return surviving_length(system, assignment);
}

double bound_including(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index) {
  double best = kNoPath;
  for (std::size_t p = 0; p < system.path_count(); ++p) {
    if (!system.path_contains(p, link_index)) continue;
    const auto& members = system.path_links(p);
    const bool possible = std::none_of(members.begin(), members.end(), [&](std::size_t l) {
      return l != link_index && assignment[l] == LinkState::Fail;
    });
    if (possible) best = std::min(best, system.path_length(p));
  }
  return best;
}

double bound_excluding(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index) {
  double best = system.penalty();
  for (std::size_t p = 0; p < system.path_count(); ++p) {
    if (system.path_contains(p, link_index)) continue;
    const auto& members = system.path_links(p);
    const bool alive = std::all_of(members.begin(), members.end(),
                                   [&](std::size_t l) { return assignment[l] == LinkState::Survive; });
    if (alive) best = std::min(best, system.path_length(p));
  }
  return best;
}

bool is_interchangeable(const PathSystem& system, const PartialAssignment& assignment, std::size_t link_index) {
  return bound_including(system, assignment, link_index) >=
         bound_excluding(system, assignment, link_index) - kTieEpsilon;
}

}  // namespace scenred
