#include "scenred/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>
#include <json.hpp>

namespace scenred {

using json = nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end(), nullptr, true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

template <typename T>
T get_field(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(fmt::format("{}: missing field '{}'", where, key));
  if constexpr (std::is_integral_v<T>)
    if (!obj.at(key).is_number_integer())
      throw ParseError(fmt::format("{}: field '{}' must be an integer", where, key));
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(fmt::format("{}: field '{}' has the wrong type", where, key));
  }
}

template <typename T>
std::optional<T> get_optional(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_field<T>(obj, key, where);
}

const json& get_array(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj.at(key).is_array())
    throw ParseError(fmt::format("{}: field '{}' must be an array", where, key));
  return obj.at(key);
}

Link parse_link(const json& j) {
  Link link;
  link.id = get_field<LinkId>(j, "id", "link");
  auto p = get_optional<double>(j, "p", "link");
  auto q = get_optional<double>(j, "q", "link");
  link.has_probabilities = p.has_value() && q.has_value();
  link.p = p.value_or(1.0);
  link.q = q.value_or(std::max(link.p, 1.0));
  link.cost = get_optional<double>(j, "cost", "link").value_or(0.0);
  link.length = get_optional<double>(j, "length", "link");
  return link;
}

AllowedPath parse_path(const json& j) {
  AllowedPath path;
  for (const auto& id : get_array(j, "links", "allowed path")) {
    if (!id.is_number_integer()) throw ParseError("allowed path: link ids must be integers");
    path.links.push_back(id.get<LinkId>());
  }
  path.length = get_field<double>(j, "length", "allowed path");
  return path;
}

PairSpec parse_pair(const json& j) {
  PairSpec pair;
  pair.source = get_field<NodeId>(j, "source", "pair");
  pair.sink = get_field<NodeId>(j, "sink", "pair");
  pair.weight = get_optional<double>(j, "weight", "pair").value_or(1.0);
  pair.m_allow = get_field<double>(j, "m_allow", "pair");
  pair.m_penalty = get_optional<double>(j, "m_penalty", "pair").value_or(pair.m_allow);
  if (j.contains("allowed_paths")) {
    for (const auto& p : get_array(j, "allowed_paths", "pair")) pair.allowed_paths.push_back(parse_path(p));
  }
  return pair;
}

Graph parse_graph(const json& j) {
  Graph g;
  g.nodes = get_field<int>(j, "nodes", "graph");
  for (const auto& e : get_array(j, "edges", "graph")) {
    GraphEdge edge;
    edge.id = get_field<LinkId>(e, "id", "graph edge");
    edge.u = get_field<NodeId>(e, "u", "graph edge");
    edge.v = get_field<NodeId>(e, "v", "graph edge");
    edge.length = get_field<double>(e, "length", "graph edge");
    g.edges.push_back(edge);
  }
  return g;
}

std::string pair_label(const PairSpec& pair) { return fmt::format("pair {}-{}", pair.source, pair.sink); }

}  // namespace

bool AllowedPath::contains(LinkId id) const {
  return std::find(links.begin(), links.end(), id) != links.end();
}

std::vector<LinkId> PairSpec::relevant_links() const {
  std::set<LinkId> ids;
  for (const auto& path : allowed_paths) ids.insert(path.links.begin(), path.links.end());
  return {ids.begin(), ids.end()};
}

std::size_t Instance::index_of(LinkId id) const {
  auto it = std::lower_bound(links.begin(), links.end(), id,
                             [](const Link& l, LinkId v) { return l.id < v; });
  if (it == links.end() || it->id != id) throw ValidationError(fmt::format("unknown link id {}", id));
  return static_cast<std::size_t>(it - links.begin());
}

bool Instance::has_link(LinkId id) const {
  auto it = std::lower_bound(links.begin(), links.end(), id,
                             [](const Link& l, LinkId v) { return l.id < v; });
  return it != links.end() && it->id == id;
}

bool Instance::probabilities_given() const {
  return std::all_of(links.begin(), links.end(), [](const Link& l) { return l.has_probabilities; });
}

void Instance::require_probabilities() const {
  for (const auto& l : links)
    if (!l.has_probabilities)
      throw ValidationError(fmt::format(
          "instance '{}': link {} has no survival probabilities (load an overlay)", name, l.id));
}

void Instance::validate() {
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (l.id <= 0) throw ValidationError(fmt::format("link id {} must be positive", l.id));
    if (i > 0 && links[i - 1].id == l.id) throw ValidationError(fmt::format("duplicate link id {}", l.id));
    if (!(l.p >= 0.0 && l.p <= 1.0)) throw ValidationError(fmt::format("link {}: p={} outside [0,1]", l.id, l.p));
    if (!(l.q >= 0.0 && l.q <= 1.0)) throw ValidationError(fmt::format("link {}: q={} outside [0,1]", l.id, l.q));
    if (l.p > l.q) throw ValidationError(fmt::format("link {}: p={} exceeds q={}", l.id, l.p, l.q));
    if (!(l.cost >= 0.0)) throw ValidationError(fmt::format("link {}: negative cost", l.id));
    if (l.length && !(*l.length > 0.0)) throw ValidationError(fmt::format("link {}: length must be positive", l.id));
  }
  if (!(budget >= 0.0)) throw ValidationError("budget must be nonnegative");

  if (graph) {
    std::map<LinkId, int> seen;
    for (const auto& e : graph->edges) {
      if (!has_link(e.id)) throw ValidationError(fmt::format("graph edge references unknown link {}", e.id));
      if (++seen[e.id] > 1) throw ValidationError(fmt::format("link {} has more than one graph edge", e.id));
      if (e.u < 1 || e.u > graph->nodes || e.v < 1 || e.v > graph->nodes)
        throw ValidationError(fmt::format("graph edge {}: endpoint outside 1..{}", e.id, graph->nodes));
      if (e.u == e.v) throw ValidationError(fmt::format("graph edge {} is a self-loop", e.id));
      if (!(e.length > 0.0)) throw ValidationError(fmt::format("graph edge {}: length must be positive", e.id));
      Link& l = links[index_of(e.id)];
      if (!l.length) l.length = e.length;
      if (std::abs(*l.length - e.length) > 1e-9)
        throw ValidationError(fmt::format("link {}: length disagrees with its graph edge", e.id));
    }
    for (const auto& l : links)
      if (!seen.contains(l.id)) throw ValidationError(fmt::format("link {} has no graph edge", l.id));
  }

  const bool all_lengths = std::all_of(links.begin(), links.end(), [](const Link& l) { return l.length.has_value(); });
  for (const auto& pair : pairs) {
    const auto label = pair_label(pair);
    if (pair.source == pair.sink) throw ValidationError(label + ": source equals sink");
    if (!(pair.weight >= 0.0)) throw ValidationError(label + ": weight must be nonnegative");
    if (!(pair.m_allow > 0.0)) throw ValidationError(label + ": m_allow must be positive");
    if (pair.m_penalty < pair.m_allow) throw ValidationError(label + ": m_penalty must be at least m_allow");
    if (pair.allowed_paths.empty()) throw ValidationError(label + ": no allowed paths");
    for (const auto& path : pair.allowed_paths) {
      if (path.links.empty()) throw ValidationError(label + ": empty allowed path");
      std::set<LinkId> members;
      for (LinkId id : path.links) {
        if (!has_link(id)) throw ValidationError(fmt::format("{}: allowed path references unknown link {}", label, id));
        if (!members.insert(id).second) throw ValidationError(fmt::format("{}: link {} repeated in a path", label, id));
      }
      if (!(path.length > 0.0)) throw ValidationError(label + ": path length must be positive");
      if (!(path.length < pair.m_allow))
        throw ValidationError(fmt::format("{}: path length {} not below m_allow {}", label, path.length, pair.m_allow));
      if (all_lengths) {
        double sum = 0.0;
        for (LinkId id : path.links) sum += *links[index_of(id)].length;
        if (std::abs(sum - path.length) > 1e-9)
          throw ValidationError(fmt::format("{}: path length {} differs from link-length sum {}", label, path.length, sum));
      }
    }
  }
}

Instance load_instance(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
  Instance inst;
  inst.name = get_optional<std::string>(doc, "name", "instance").value_or("");
  inst.budget = get_field<double>(doc, "budget", "instance");
  for (const auto& l : get_array(doc, "links", "instance")) inst.links.push_back(parse_link(l));
  for (const auto& p : get_array(doc, "pairs", "instance")) inst.pairs.push_back(parse_pair(p));
  if (doc.contains("graph") && !doc.at("graph").is_null()) inst.graph = parse_graph(doc.at("graph"));

  if (inst.graph) {
    // Graph-given pairs without explicit paths get them enumerated. The
    // graph is validated first so enumeration sees consistent data.
    Instance topo = inst;
    topo.pairs.clear();
    topo.validate();
    for (auto& pair : inst.pairs) {
      if (pair.allowed_paths.empty() && pair.source != pair.sink)
        pair.allowed_paths = enumerate_allowed_paths(topo, pair);
    }
  }
  inst.validate();
  return inst;
}

Instance load_instance_file(const std::string& path) { return load_instance(read_file(path)); }

std::string serialize_instance(const Instance& instance) {
  json doc;
  doc["name"] = instance.name;
  doc["budget"] = instance.budget;
  doc["links"] = json::array();
  for (const auto& l : instance.links) {
    json jl;
    jl["id"] = l.id;
    if (l.has_probabilities) {
      jl["p"] = l.p;
      jl["q"] = l.q;
    }
    jl["cost"] = l.cost;
    if (l.length) jl["length"] = *l.length;
    doc["links"].push_back(jl);
  }
  doc["pairs"] = json::array();
  for (const auto& p : instance.pairs) {
    json jp;
    jp["source"] = p.source;
    jp["sink"] = p.sink;
    jp["weight"] = p.weight;
    jp["m_allow"] = p.m_allow;
    jp["m_penalty"] = p.m_penalty;
    jp["allowed_paths"] = json::array();
    for (const auto& path : p.allowed_paths) jp["allowed_paths"].push_back({{"links", path.links}, {"length", path.length}});
    doc["pairs"].push_back(jp);
  }
  if (instance.graph) {
    json jg;
    jg["nodes"] = instance.graph->nodes;
    jg["edges"] = json::array();
    for (const auto& e : instance.graph->edges)
      jg["edges"].push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"length", e.length}});
    doc["graph"] = jg;
  }
  return doc.dump(2) + "\n";
}

Instance apply_overlay(const Instance& base, std::string_view overlay_document) {
  const json doc = parse_json(overlay_document);
  if (!doc.is_object()) throw ParseError("overlay document must be a JSON object");
  Instance out = base;
  if (auto name = get_optional<std::string>(doc, "name", "overlay")) out.name = *name;
  if (auto budget = get_optional<double>(doc, "budget", "overlay")) out.budget = *budget;
  if (doc.contains("links")) {
    for (const auto& jl : get_array(doc, "links", "overlay")) {
      const LinkId id = get_field<LinkId>(jl, "id", "overlay link");
      Link& l = out.links[out.index_of(id)];
      auto p = get_optional<double>(jl, "p", "overlay link");
      auto q = get_optional<double>(jl, "q", "overlay link");
      if (p) l.p = *p;
      if (q) l.q = *q;
      if (!l.has_probabilities) l.has_probabilities = p.has_value() && q.has_value();
      if (auto cost = get_optional<double>(jl, "cost", "overlay link")) l.cost = *cost;
      if (auto length = get_optional<double>(jl, "length", "overlay link")) l.length = *length;
    }
  }
  if (doc.contains("pairs")) {
    for (const auto& jp : get_array(doc, "pairs", "overlay")) {
      const NodeId source = get_field<NodeId>(jp, "source", "overlay pair");
      const NodeId sink = get_field<NodeId>(jp, "sink", "overlay pair");
      auto it = std::find_if(out.pairs.begin(), out.pairs.end(),
                             [&](const PairSpec& p) { return p.source == source && p.sink == sink; });
      if (it == out.pairs.end())
        throw ValidationError(fmt::format("overlay references unknown pair {}-{}", source, sink));
      if (auto w = get_optional<double>(jp, "weight", "overlay pair")) it->weight = *w;
      if (auto m = get_optional<double>(jp, "m_allow", "overlay pair")) it->m_allow = *m;
      if (auto m = get_optional<double>(jp, "m_penalty", "overlay pair")) it->m_penalty = *m;
      if (jp.contains("allowed_paths")) {
        it->allowed_paths.clear();
        for (const auto& path : get_array(jp, "allowed_paths", "overlay pair")) it->allowed_paths.push_back(parse_path(path));
      }
    }
  }
  out.validate();
  return out;
}

Instance apply_overlay_file(const Instance& base, const std::string& path) {
  return apply_overlay(base, read_file(path));
}

std::vector<AllowedPath> enumerate_allowed_paths(const Instance& instance, const PairSpec& pair) {
  if (!instance.graph) throw ValidationError("enumerate_allowed_paths: instance has no graph topology");
  const Graph& g = *instance.graph;
  if (pair.source == pair.sink) throw ValidationError(pair_label(pair) + ": source equals sink");
  for (NodeId n : {pair.source, pair.sink})
    if (n < 1 || n > g.nodes) throw ValidationError(fmt::format("{}: node {} not in graph", pair_label(pair), n));

  struct Arc {
    NodeId to;
    LinkId link;
    double length;
  };
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(g.nodes) + 1);
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.v, e.id, e.length});
    adj[e.v].push_back({e.u, e.id, e.length});
  }

  std::vector<AllowedPath> found;
  std::vector<bool> on_path(adj.size(), false);
  AllowedPath current;
  // Depth-first over simple paths, pruned by the m_allow bound (all edge
  // lengths are positive).
  auto dfs = [&](auto&& self, NodeId node) -> void {
    if (node == pair.sink) {
      found.push_back(current);
      return;
    }
    on_path[node] = true;
    for (const Arc& arc : adj[node]) {
      if (on_path[arc.to]) continue;
      const double next = current.length + arc.length;
      if (!(next < pair.m_allow)) continue;
      current.links.push_back(arc.link);
      current.length = next;
      self(self, arc.to);
      current.links.pop_back();
      current.length -= arc.length;
    }
    on_path[node] = false;
  };
  dfs(dfs, pair.source);

  // Recompute totals in traversal order so they do not carry add/subtract drift.
  for (auto& path : found) {
    path.length = 0.0;
    for (LinkId id : path.links) path.length += *instance.links[instance.index_of(id)].length;
  }
  std::sort(found.begin(), found.end(), [](const AllowedPath& a, const AllowedPath& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.links < b.links;
  });
  return found;
}

double plan_cost(const InvestmentPlan& plan, const Instance& instance) {
  if (plan.size() != instance.link_count())
    throw ValidationError(fmt::format("plan has {} entries, instance has {} links", plan.size(), instance.link_count()));
  double cost = 0.0;
  for (std::size_t i = 0; i < plan.size(); ++i)
    if (plan.invest[i]) cost += instance.links[i].cost;
  return cost;
}

InvestmentPlan parse_plan(std::string_view bits, std::size_t link_count) {
  if (bits.size() != link_count)
    throw ValidationError(fmt::format("plan '{}' has {} entries, instance has {} links", bits, bits.size(), link_count));
  InvestmentPlan plan;
  plan.invest.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError(fmt::format("plan '{}' must contain only 0 and 1", bits));
    plan.invest.push_back(c == '1');
  }
  return plan;
}

std::string format_plan(const InvestmentPlan& plan) {
  std::string s;
  s.reserve(plan.size());
  for (bool b : plan.invest) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace scenred
