#ifndef SCENRED_TESTS_SUPPORT_HPP
#define SCENRED_TESTS_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scenred/instance.hpp"
#include "scenred/reduction.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SCENRED_SOURCE_DIR) + "/data/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(SCENRED_SOURCE_DIR) + "/golden/" + name; }

inline scenred::Instance small() { return scenred::load_instance_file(data_path("small.json")); }
inline scenred::Instance istanbul() { return scenred::load_instance_file(data_path("istanbul.json")); }
inline scenred::Instance istanbul_overlay() {
  return scenred::apply_overlay_file(istanbul(), data_path("istanbul-overlay.json"));
}

inline scenred::InvestmentPlan plan_of(const std::string& bits) {
  scenred::InvestmentPlan p;
  for (char c : bits) p.invest.push_back(c == '1');
  return p;
}

/// Expected shortest path of the four-link example written out by hand:
/// {1,4} has length 2, {1,2,3} length 3, penalty 3.5. Survival of link e is
/// s[e-1]. Enumerates the 16 scenarios directly.
inline double small_example_expectation(const std::array<double, 4>& s) {
  double sum = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    const bool up[4] = {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0};
    double prob = 1.0;
    for (int e = 0; e < 4; ++e) prob *= up[e] ? s[e] : 1.0 - s[e];
    double len = 3.5;
    if (up[0] && up[1] && up[2]) len = 3.0;
    if (up[0] && up[3]) len = 2.0;
    sum += prob * len;
  }
  return sum;
}

inline std::array<double, 4> small_survival(const std::string& plan) {
  std::array<double, 4> s{};
  for (int e = 0; e < 4; ++e) s[e] = plan[e] == '1' ? 1.0 : 0.8;
  return s;
}

/// Random instance with `links` links and one to three pairs of random
/// allowed paths. Lengths are small integers so ties occur often.
inline scenred::Instance random_instance(std::mt19937_64& rng, int links, int max_paths = 4) {
  scenred::Instance inst;
  inst.name = "random";
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  std::uniform_int_distribution<int> cost(1, 3);
  for (int id = 1; id <= links; ++id) {
    const double p = prob(rng);
    inst.links.push_back({id, p, std::min(1.0, p + 0.5 * (1.0 - p)), static_cast<double>(cost(rng)), std::nullopt, true});
  }
  inst.budget = 3;
  std::uniform_int_distribution<int> n_pairs(1, 3), n_paths(1, max_paths), path_len(1, std::min(links, 4)),
      pick(1, links), len(1, 9);
  const int pairs = n_pairs(rng);
  for (int k = 0; k < pairs; ++k) {
    scenred::PairSpec pair;
    pair.source = 100 + k;
    pair.sink = 200 + k;
    pair.weight = 1.0 / pairs;
    pair.m_allow = 40;
    pair.m_penalty = 40 + 5 * k;
    const int np = n_paths(rng);
    for (int i = 0; i < np; ++i) {
      scenred::AllowedPath path;
      const int want = path_len(rng);
      while (static_cast<int>(path.links.size()) < want) {
        const int id = pick(rng);
        if (!path.contains(id)) path.links.push_back(id);
      }
      for (std::size_t j = 0; j < path.links.size(); ++j) path.length += len(rng);
      pair.allowed_paths.push_back(path);
    }
    inst.pairs.push_back(pair);
  }
  inst.validate();
  return inst;
}

inline std::vector<scenred::LinkId> random_permutation(const scenred::Instance& inst, std::mt19937_64& rng) {
  std::vector<scenred::LinkId> perm;
  for (const auto& l : inst.links) perm.push_back(l.id);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// Expands each row over the given link indices ("i" entries take both
/// values) and counts how often each complete relevant-link scenario
/// (bitmask over `relevant`) is produced.
inline std::map<std::uint64_t, int> expand_rows(const scenred::MultiscenarioSet& set, const scenred::Instance& inst,
                                                const std::vector<std::size_t>& relevant) {
  const auto order = scenred::permutation_indices(inst, set.permutation);
  std::vector<std::size_t> pos_of(inst.link_count());
  for (std::size_t pos = 0; pos < order.size(); ++pos) pos_of[order[pos]] = pos;
  std::map<std::uint64_t, int> hits;
  for (const auto& row : set.rows) {
    std::vector<std::size_t> free_bits;
    std::uint64_t base = 0;
    for (std::size_t b = 0; b < relevant.size(); ++b) {
      const auto sym = row.values[pos_of[relevant[b]]];
      if (sym == scenred::Symbol::Any) free_bits.push_back(b);
      if (sym == scenred::Symbol::Survive) base |= std::uint64_t{1} << b;
    }
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_bits.size()); ++m) {
      std::uint64_t full = base;
      for (std::size_t f = 0; f < free_bits.size(); ++f)
        if ((m >> f) & 1U) full |= std::uint64_t{1} << free_bits[f];
      ++hits[full];
    }
  }
  return hits;
}

}  // namespace testing

#endif  // SCENRED_TESTS_SUPPORT_HPP
