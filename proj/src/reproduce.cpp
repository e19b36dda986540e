#include "scenred/reproduce.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "scenred/evaluation.hpp"
#include "scenred/ga.hpp"
#include "scenred/oracle.hpp"
#include "scenred/permutation_search.hpp"
#include "scenred/reduction.hpp"

namespace scenred {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open golden file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

// Keeps the header line and sorts the rows with i < 0 < 1.
std::string canonical_table(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() > 1) {
    auto key = [](std::string s) {
      std::replace(s.begin(), s.end(), 'i', '.');
      return s;
    };
    std::sort(lines.begin() + 1, lines.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  }
  return join_lines(lines);
}

struct Comparison {
  std::string report;
  std::string golden;
  std::string name;
};

ReproduceOutcome finish(std::string_view target, const std::vector<Comparison>& parts) {
  ReproduceOutcome out{std::string(target), true, {}, {}};
  for (const auto& part : parts) {
    out.report += part.report;
    if (part.report != part.golden) {
      out.match = false;
      out.diff += unified_diff(part.golden, part.report, "golden/" + part.name, "computed/" + part.name);
    }
  }
  return out;
}

std::vector<Comparison> table2(const fs::path& data_dir, const fs::path& golden_dir) {
  const Instance small = load_instance_file((data_dir / "small.json").string());
  const InvestmentPlan none{std::vector<bool>(small.link_count(), false)};
  std::vector<Comparison> parts;
  for (const char* name : {"perm_3241.txt", "perm_1324.txt", "perm_1423.txt"}) {
    const std::string golden = slurp(golden_dir / "table2" / name);
    const auto perm = parse_permutation(split_lines(golden).front());
    const auto set = reduce(small, 0, perm);
    std::string text = format_permutation(set.permutation) + '\n';
    for (const auto& row : set.rows)
      text += fmt::format("{} {:.4f}\n", format_symbols(row), row_probability(row, set, none, small));
    parts.push_back({canonical_table(text), canonical_table(golden), std::string("table2/") + name});
  }
  return parts;
}

std::vector<Comparison> table3(const fs::path& data_dir, const fs::path& golden_dir) {
  const Instance istanbul = load_instance_file((data_dir / "istanbul.json").string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(golden_dir / "table3"))
    if (entry.path().extension() == ".perm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.size() != istanbul.pairs.size())
    throw std::runtime_error(fmt::format("expected {} permutation files, found {}", istanbul.pairs.size(), files.size()));

  std::string text = "instance pair permutation-file multiscenarios\n";
  std::size_t total = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    const auto perm = read_permutation_file(files[k].string());
    const auto size = reduce(istanbul, k, perm).size();
    total += size;
    const auto& pair = istanbul.pairs[k];
    text += fmt::format("{} {}-{} {} {}\n", k + 1, pair.source, pair.sink, files[k].filename().string(), size);
  }
  text += fmt::format("total {}\n", total);
  return {{text, slurp(golden_dir / "table3" / "sizes.txt"), "table3/sizes.txt"}};
}

std::vector<Comparison> table4(const fs::path& data_dir, const fs::path& golden_dir) {
  const Instance istanbul = load_instance_file((data_dir / "istanbul.json").string());
  const std::string golden = slurp(golden_dir / "table4" / "pair3_9-7.txt");
  const auto perm = parse_permutation(split_lines(golden).front());
  const auto set = reduce(istanbul, 3, perm);
  std::string text = format_permutation(set.permutation) + '\n';
  for (const auto& row : set.rows) text += format_symbols(row) + '\n';
  return {{canonical_table(text), canonical_table(golden), "table4/pair3_9-7.txt"}};
}

std::vector<Comparison> small_optimum(const fs::path& data_dir, const fs::path& golden_dir) {
  const Instance small = load_instance_file((data_dir / "small.json").string());
  const auto objective = Objective::expectation();
  const auto [plan, value] = oracle::brute_force_optimal(small, objective);

  std::vector<MultiscenarioSet> sets;
  for (std::size_t i = 0; i < small.pairs.size(); ++i)
    sets.push_back(reduce(small, i, heuristic_permutation(small, i)));
  const CompiledSets compiled(sets, small);
  GaParams params;
  params.seed = 1;
  const auto ga = run_ga(small, compiled, objective, params);

  std::string text = fmt::format("exhaustive plan {} value {:.3f}\n", format_plan(plan), value);
  text += fmt::format("ga plan {} value {:.3f}\n", format_plan(ga.plan), ga.value);
  return {{text, slurp(golden_dir / "small_optimum.txt"), "small_optimum.txt"}};
}

}  // namespace

ReproduceOutcome reproduce(std::string_view target, const fs::path& data_dir, const fs::path& golden_dir) {
  if (target == "table2") return finish(target, table2(data_dir, golden_dir));
  if (target == "table3") return finish(target, table3(data_dir, golden_dir));
  if (target == "table4") return finish(target, table4(data_dir, golden_dir));
  if (target == "small-optimum") return finish(target, small_optimum(data_dir, golden_dir));
  throw std::invalid_argument(fmt::format("unknown reproduction target '{}'", target));
}

std::string unified_diff(std::string_view expected, std::string_view actual, std::string_view expected_name,
                         std::string_view actual_name) {
  if (expected == actual) return {};
  const auto a = split_lines(expected);
  const auto b = split_lines(actual);
  // LCS table, then walk it to emit ' ', '-' and '+' lines.
  std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = a.size(); i-- > 0;)
    for (std::size_t j = b.size(); j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

  std::string body;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i] == b[j]) {
      body += " " + a[i++] + '\n';
      ++j;
    } else if (j < b.size() && (i == a.size() || lcs[i][j + 1] >= lcs[i + 1][j])) {
      body += "+" + b[j++] + '\n';
    } else {
      body += "-" + a[i++] + '\n';
    }
  }
  return fmt::format("--- {}\n+++ {}\n@@ -1,{} +1,{} @@\n{}", expected_name, actual_name, a.size(), b.size(), body);
}

}  // namespace scenred
