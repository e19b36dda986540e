#ifndef SCENRED_REPRODUCE_HPP
#define SCENRED_REPRODUCE_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scenred {

struct ReproduceOutcome {
  std::string target;
  bool match = false;
  std::string report;  // what was computed, in golden-file layout
  std::string diff;    // unified diff golden -> computed; empty on match
};

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> targets{"table2", "table3", "table4", "small-optimum"};
  return targets;
}

/// Runs one reproduction target against the bundled instances in `data_dir`
/// and compares it with the golden files in `golden_dir`.
ReproduceOutcome reproduce(std::string_view target, const std::filesystem::path& data_dir,
                           const std::filesystem::path& golden_dir);

/// Line-based unified diff (single hunk, LCS alignment).
std::string unified_diff(std::string_view expected, std::string_view actual, std::string_view expected_name,
                         std::string_view actual_name);

}  // namespace scenred

#endif  // SCENRED_REPRODUCE_HPP
