#include "msdg/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace msdg {

namespace {

constexpr int kGraphSchemaVersion = 1;

void check_vertex(const DependenceGraph& graph, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= graph.dim())
    throw std::runtime_error("unknown vertex " + std::to_string(v));
}

std::string quote_dot(const std::string& label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", w);
  return buf;
}

}  // namespace

bool DependenceGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

DependenceGraph build_msdgm(const EdgeStatisticMatrix& stats,
                            const std::vector<std::string>& names, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::runtime_error("threshold alpha must lie in (0,1)");
  if (names.size() != stats.dim)
    throw std::runtime_error("name list does not match the statistic matrix dimension");
  DependenceGraph graph;
  graph.names = names;
  graph.alpha = alpha;
  graph.statistics = stats.values;
  for (std::size_t i = 0; i + 1 < stats.dim; ++i)
    for (std::size_t j = i + 1; j < stats.dim; ++j)
      if (stats.at(i, j) > alpha)
        graph.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return graph;
}

std::vector<int> neighborhood(const DependenceGraph& graph, int v) {
  check_vertex(graph, v);
  std::vector<int> out;
  for (const auto& [i, j] : graph.edges) {
    if (i == v) out.push_back(j);
    if (j == v) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> connected_components(const DependenceGraph& graph) {
  const int n = static_cast<int>(graph.dim());
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& [i, j] : graph.edges) {
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<int> block;
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      block.push_back(v);
      for (int u : adjacency[v]) {
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
    std::sort(block.begin(), block.end());
    components.push_back(std::move(block));
  }
  return components;
}

bool is_separator(const DependenceGraph& graph, const std::vector<int>& separating_set, int i,
                  int j) {
  check_vertex(graph, i);
  check_vertex(graph, j);
  if (i == j) throw std::runtime_error("separator query needs two distinct vertices");
  std::set<int> removed(separating_set.begin(), separating_set.end());
  for (int s : removed) check_vertex(graph, s);
  if (removed.count(i) || removed.count(j))
    throw std::runtime_error("separator set must not contain the query vertices");

  const int n = static_cast<int>(graph.dim());
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& [a, b] : graph.edges) {
    if (removed.count(a) || removed.count(b)) continue;
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{i};
  seen[i] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == j) return false;
    for (int u : adjacency[v]) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return true;
}

std::string export_graph(const DependenceGraph& graph, GraphFormat format) {
  if (format == GraphFormat::dot) {
    std::ostringstream out;
    out << "graph dependence {\n";
    for (const auto& name : graph.names) out << "  " << quote_dot(name) << ";\n";
    for (const auto& [i, j] : graph.edges) {
      out << "  " << quote_dot(graph.names[i]) << " -- " << quote_dot(graph.names[j])
          << " [weight=" << format_weight(graph.statistic(i, j)) << "];\n";
    }
    out << "}\n";
    return out.str();
  }

  nlohmann::json doc;
  doc["version"] = kGraphSchemaVersion;
  doc["alpha"] = graph.alpha;
  nlohmann::json vertices = nlohmann::json::array();
  for (std::size_t v = 0; v < graph.dim(); ++v)
    vertices.push_back({{"id", v}, {"name", graph.names[v]}});
  doc["vertices"] = vertices;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [i, j] : graph.edges)
    edges.push_back({{"source", i}, {"target", j}, {"weight", graph.statistic(i, j)}});
  doc["edges"] = edges;
  nlohmann::json stats = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < graph.dim(); ++j) row.push_back(graph.statistic(i, j));
    stats.push_back(row);
  }
  doc["statistics"] = stats;
  return doc.dump(2) + "\n";
}

DependenceGraph read_graph_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.contains("version") || doc["version"].get<int>() != kGraphSchemaVersion)
    throw std::runtime_error("unsupported graph schema version");
  DependenceGraph graph;
  graph.alpha = doc.at("alpha").get<double>();
  for (const auto& v : doc.at("vertices")) graph.names.push_back(v.at("name").get<std::string>());
  const std::size_t d = graph.names.size();
  graph.statistics.assign(d * d, 0.0);
  const auto& stats = doc.at("statistics");
  if (stats.size() != d) throw std::runtime_error("statistics matrix does not match vertex count");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) graph.statistics[i * d + j] = stats[i][j].get<double>();
  for (const auto& e : doc.at("edges"))
    graph.edges.emplace_back(e.at("source").get<int>(), e.at("target").get<int>());
  std::sort(graph.edges.begin(), graph.edges.end());
  return graph;
}

bool operator==(const DependenceGraph& a, const DependenceGraph& b) {
  return a.names == b.names && a.alpha == b.alpha && a.statistics == b.statistics &&
         a.edges == b.edges;
}

}  // namespace msdg
