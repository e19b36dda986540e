#include "scenred/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace scenred {

char symbol_char(Symbol s) {
  switch (s) {
    case Symbol::Any: return 'i';
    case Symbol::Fail: return '0';
    case Symbol::Survive: return '1';
  }
  return '?';
}

Symbol symbol_from_char(char c) {
  switch (c) {
    case 'i': return Symbol::Any;
    case '0': return Symbol::Fail;
    case '1': return Symbol::Survive;
    default: throw ParseError(fmt::format("invalid multiscenario symbol '{}'", c));
  }
}

std::vector<std::size_t> permutation_indices(const Instance& instance, std::span<const LinkId> permutation) {
  if (permutation.size() != instance.link_count())
    throw ValidationError(fmt::format("permutation has {} entries, instance has {} links", permutation.size(),
                                      instance.link_count()));
  std::vector<std::size_t> order;
  std::vector<bool> used(instance.link_count(), false);
  for (LinkId id : permutation) {
    const std::size_t idx = instance.index_of(id);
    if (used[idx]) throw ValidationError(fmt::format("permutation repeats link {}", id));
    used[idx] = true;
    order.push_back(idx);
  }
  return order;
}

namespace {

// Shared DFS driver. `on_leaf` receives the symbol vector and assignment at
// each leaf and returns false to abort the search.
template <typename Leaf>
bool realize(const PathSystem& system, std::span<const std::size_t> order, std::size_t depth,
             PartialAssignment& assignment, std::vector<Symbol>& symbols, Leaf& on_leaf) {
  if (depth == order.size()) return on_leaf(symbols, assignment);
  const std::size_t link = order[depth];
  if (is_interchangeable(system, assignment, link)) {
    symbols[depth] = Symbol::Any;
    return realize(system, order, depth + 1, assignment, symbols, on_leaf);
  }
  for (auto [sym, state] : {std::pair{Symbol::Fail, LinkState::Fail}, std::pair{Symbol::Survive, LinkState::Survive}}) {
    symbols[depth] = sym;
    assignment.set(link, state);
    const bool go_on = realize(system, order, depth + 1, assignment, symbols, on_leaf);
    assignment.set(link, LinkState::Free);
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

std::vector<Multiscenario> reduce(const PathSystem& system, std::span<const std::size_t> order) {
  if (order.size() != system.link_count())
    throw ValidationError("reduce: order must cover every link exactly once");
  std::vector<Multiscenario> rows;
  PartialAssignment assignment(system.link_count());
  std::vector<Symbol> symbols(order.size(), Symbol::Any);
  auto emit = [&](const std::vector<Symbol>& values, const PartialAssignment& a) {
    rows.push_back({values, surviving_length(system, a)});
    return true;
  };
  realize(system, order, 0, assignment, symbols, emit);
  return rows;
}

MultiscenarioSet reduce(const Instance& instance, std::size_t pair_index, std::span<const LinkId> permutation) {
  if (pair_index >= instance.pairs.size())
    throw ValidationError(fmt::format("pair index {} out of range (instance has {} pairs)", pair_index,
                                      instance.pairs.size()));
  const auto order = permutation_indices(instance, permutation);
  const PathSystem system(instance, instance.pairs[pair_index]);
  MultiscenarioSet set;
  set.pair_index = pair_index;
  set.permutation.assign(permutation.begin(), permutation.end());
  set.rows = reduce(system, order);
  return set;
}

std::size_t count_multiscenarios(const PathSystem& system, std::span<const std::size_t> order, std::size_t limit) {
  std::size_t count = 0;
  PartialAssignment assignment(system.link_count());
  std::vector<Symbol> symbols(order.size(), Symbol::Any);
  auto tally = [&](const std::vector<Symbol>&, const PartialAssignment&) { return ++count <= limit; };
  realize(system, order, 0, assignment, symbols, tally);
  return count;
}

std::vector<double> survival_probabilities(const Instance& instance, const InvestmentPlan& plan) {
  if (plan.size() != instance.link_count())
    throw ValidationError(fmt::format("plan has {} entries, instance has {} links", plan.size(), instance.link_count()));
  std::vector<double> s(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) s[i] = plan.invest[i] ? instance.links[i].q : instance.links[i].p;
  return s;
}

double row_probability(const Multiscenario& row, std::span<const std::size_t> order, std::span<const double> survival) {
  double prob = 1.0;
  for (std::size_t pos = 0; pos < row.values.size(); ++pos) {
    switch (row.values[pos]) {
      case Symbol::Any: break;
      case Symbol::Fail: prob *= 1.0 - survival[order[pos]]; break;
      case Symbol::Survive: prob *= survival[order[pos]]; break;
    }
  }
  return prob;
}

double row_probability(const Multiscenario& row, const MultiscenarioSet& set, const InvestmentPlan& plan,
                       const Instance& instance) {
  const auto order = permutation_indices(instance, set.permutation);
  const auto survival = survival_probabilities(instance, plan);
  return row_probability(row, order, survival);
}

std::vector<Multiscenario> canonical_rows(std::vector<Multiscenario> rows) {
  std::sort(rows.begin(), rows.end(), [](const Multiscenario& a, const Multiscenario& b) { return a.values < b.values; });
  return rows;
}

std::string format_symbols(const Multiscenario& row) {
  std::string s;
  for (std::size_t i = 0; i < row.values.size(); ++i) {
    if (i) s.push_back(' ');
    s.push_back(symbol_char(row.values[i]));
  }
  return s;
}

std::string format_permutation(std::span<const LinkId> permutation, char sep) {
  std::string s;
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (i) s.push_back(sep);
    s += std::to_string(permutation[i]);
  }
  return s;
}

std::vector<LinkId> parse_permutation(std::string_view text) {
  std::string cleaned(text);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<LinkId> ids;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError(fmt::format("invalid link id '{}' in permutation", token));
    ids.push_back(value);
  }
  if (ids.empty()) throw ParseError("empty permutation");
  return ids;
}

std::vector<LinkId> read_permutation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
  std::string header;
  std::getline(in, header);
  return parse_permutation(header);
}

void write_set(std::ostream& out, const MultiscenarioSet& set) {
  out << format_permutation(set.permutation) << '\n';
  for (const auto& row : set.rows) out << format_symbols(row) << ' ' << fmt::format("{}", row.length) << '\n';
}

std::string format_set(const MultiscenarioSet& set) {
  std::ostringstream out;
  write_set(out, set);
  return out.str();
}

MultiscenarioSet read_set(std::istream& in) {
  MultiscenarioSet set;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("set file: missing permutation header");
  set.permutation = parse_permutation(line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != set.permutation.size() + 1)
      throw ParseError(fmt::format("set file: row has {} fields, expected {}", tokens.size(),
                                   set.permutation.size() + 1));
    Multiscenario row;
    for (std::size_t i = 0; i < set.permutation.size(); ++i) {
      if (tokens[i].size() != 1) throw ParseError(fmt::format("set file: bad symbol '{}'", tokens[i]));
      row.values.push_back(symbol_from_char(tokens[i][0]));
    }
    try {
      row.length = std::stod(tokens.back());
    } catch (const std::exception&) {
      throw ParseError(fmt::format("set file: bad length '{}'", tokens.back()));
    }
    set.rows.push_back(std::move(row));
  }
  return set;
}

}  // namespace scenred
