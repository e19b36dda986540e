#ifndef SCENRED_REDUCTION_HPP
#define SCENRED_REDUCTION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenred/instance.hpp"
#include "scenred/path_semantics.hpp"

namespace scenred {

/// Multiscenario entry. Declaration order is the canonical sort order i < 0 < 1.
enum class Symbol : std::uint8_t { Any, Fail, Survive };

char symbol_char(Symbol s);
Symbol symbol_from_char(char c);  // throws ParseError

/// A bundle of scenarios that agree on the 0/1 entries and have the same
/// shortest path length whatever the "i" entries are.
struct Multiscenario {
  std::vector<Symbol> values;  // in permutation order
  double length = 0.0;

  bool operator==(const Multiscenario&) const = default;
};

struct MultiscenarioSet {
  std::size_t pair_index = 0;
  std::vector<LinkId> permutation;
  std::vector<Multiscenario> rows;

  std::size_t size() const { return rows.size(); }
};

/// Checks that `permutation` lists every instance link exactly once and
/// returns it as link indices.
std::vector<std::size_t> permutation_indices(const Instance& instance, std::span<const LinkId> permutation);

/// Depth-first realization of the links in permutation order, merging a link
/// as "i" whenever it is interchangeable at that node. Fail is explored
/// before Survive, so rows come out in a fixed order.
MultiscenarioSet reduce(const Instance& instance, std::size_t pair_index, std::span<const LinkId> permutation);
std::vector<Multiscenario> reduce(const PathSystem& system, std::span<const std::size_t> order);

/// Number of rows `reduce` would emit, without building them. Stops early and
/// returns limit + 1 once the count exceeds `limit`.
std::size_t count_multiscenarios(const PathSystem& system, std::span<const std::size_t> order,
                                 std::size_t limit = SIZE_MAX - 1);

inline std::size_t set_size(const MultiscenarioSet& set) { return set.size(); }

/// Survival probability of every link (q if invested, else p), by link index.
std::vector<double> survival_probabilities(const Instance& instance, const InvestmentPlan& plan);

/// Product over the row's 0/1 entries of (1 - s) or s. `order` holds the
/// link index of each row position.
double row_probability(const Multiscenario& row, std::span<const std::size_t> order,
                       std::span<const double> survival);
double row_probability(const Multiscenario& row, const MultiscenarioSet& set, const InvestmentPlan& plan,
                       const Instance& instance);

/// Rows sorted lexicographically with i < 0 < 1.
std::vector<Multiscenario> canonical_rows(std::vector<Multiscenario> rows);

std::string format_symbols(const Multiscenario& row);
std::string format_permutation(std::span<const LinkId> permutation, char sep = ' ');
/// Accepts comma- and/or whitespace-separated link ids.
std::vector<LinkId> parse_permutation(std::string_view text);
std::vector<LinkId> read_permutation_file(const std::string& path);

/// Set file: permutation header line, then one row per line with its symbols
/// and length, all space separated.
void write_set(std::ostream& out, const MultiscenarioSet& set);
std::string format_set(const MultiscenarioSet& set);
MultiscenarioSet read_set(std::istream& in);

}  // namespace scenred

#endif  // SCENRED_REDUCTION_HPP
