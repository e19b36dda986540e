#ifndef SCENRED_INSTANCE_HPP
#define SCENRED_INSTANCE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scenred {

using LinkId = int;
using NodeId = int;

/// Malformed instance document (bad JSON, wrong field types).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed document whose content breaks an instance invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Link {
  LinkId id = 0;
  double p = 1.0;     // survival probability without investment
  double q = 1.0;     // survival probability with investment
  double cost = 0.0;
  std::optional<double> length;
  // False when the document gave no p/q for this link (e.g. the bare
  // Istanbul file); p and q then hold placeholders.
  bool has_probabilities = true;

  bool operator==(const Link&) const = default;
};

struct AllowedPath {
  std::vector<LinkId> links;  // traversal order
  double length = 0.0;

  bool contains(LinkId id) const;
  bool operator==(const AllowedPath&) const = default;
};

struct PairSpec {
  NodeId source = 0;
  NodeId sink = 0;
  double weight = 1.0;
  double m_allow = 0.0;
  double m_penalty = 0.0;
  std::vector<AllowedPath> allowed_paths;

  /// Sorted ids of every link that appears in some allowed path.
  std::vector<LinkId> relevant_links() const;
  bool operator==(const PairSpec&) const = default;
};

struct GraphEdge {
  LinkId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

struct Graph {
  int nodes = 0;
  std::vector<GraphEdge> edges;

  bool operator==(const Graph&) const = default;
};

/// Binary investment decision per link, stored in ascending link-id order.
struct InvestmentPlan {
  std::vector<bool> invest;

  std::size_t size() const { return invest.size(); }
  bool operator==(const InvestmentPlan&) const = default;
};

/// Full problem statement. Links are kept sorted by id; the position of a
/// link in `links` is its "link index", used by every dense per-link vector
/// (plans, survival probabilities, partial assignments).
class Instance {
 public:
  std::string name;
  std::vector<Link> links;
  double budget = 0.0;
  std::vector<PairSpec> pairs;
  std::optional<Graph> graph;

  std::size_t link_count() const { return links.size(); }
  std::size_t index_of(LinkId id) const;  // throws ValidationError if unknown
  bool has_link(LinkId id) const;
  bool probabilities_given() const;
  /// Throws ValidationError unless every link carries p and q.
  void require_probabilities() const;

  /// Sorts links, checks every invariant, throws ValidationError naming the
  /// first violation.
  void validate();

  bool operator==(const Instance&) const = default;
};

Instance load_instance(std::string_view document);
Instance load_instance_file(const std::string& path);
std::string serialize_instance(const Instance& instance);

/// Merges a sparse overlay document over `base`: top-level name/budget,
/// links matched by id, pairs matched by (source, sink). The result is
/// re-validated.
Instance apply_overlay(const Instance& base, std::string_view overlay_document);
Instance apply_overlay_file(const Instance& base, const std::string& path);

/// All simple source->sink paths in the instance graph shorter than the
/// pair's m_allow, ascending by length, ties by link-id sequence.
std::vector<AllowedPath> enumerate_allowed_paths(const Instance& instance,
                                                 const PairSpec& pair);

double plan_cost(const InvestmentPlan& plan, const Instance& instance);

/// Plan <-> "0/1 string in link-id order".
InvestmentPlan parse_plan(std::string_view bits, std::size_t link_count);
std::string format_plan(const InvestmentPlan& plan);

}  // namespace scenred

#endif  // SCENRED_INSTANCE_HPP
