#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "msdg/partial.hpp"

namespace msdg {

/// Undirected dependence graph over the process types: an edge joins {i,j}
/// when the aggregated partial-dependence statistic strictly exceeds the
/// threshold. Isolated vertices are kept.
struct DependenceGraph {
  std::vector<std::string> names;              ///< vertex labels, registry order
  double alpha = 0.0;                          ///< threshold in (0,1)
  std::vector<double> statistics;              ///< full d x d matrix, row-major
  std::vector<std::pair<int, int>> edges;      ///< i < j, lexicographic order

  std::size_t dim() const { return names.size(); }
  double statistic(std::size_t i, std::size_t j) const { return statistics[i * dim() + j]; }
  bool has_edge(int i, int j) const;
};

DependenceGraph build_msdgm(const EdgeStatisticMatrix& stats,
                            const std::vector<std::string>& names, double alpha);

/// All vertices adjacent to v.
std::vector<int> neighborhood(const DependenceGraph& graph, int v);

/// Partition of the vertices into maximal connected subgraphs, each block
/// sorted, blocks ordered by smallest member.
std::vector<std::vector<int>> connected_components(const DependenceGraph& graph);

/// True when removing S disconnects i from j.
bool is_separator(const DependenceGraph& graph, const std::vector<int>& separating_set, int i,
                  int j);

enum class GraphFormat { dot, json };

std::string export_graph(const DependenceGraph& graph, GraphFormat format);

/// Inverse of the json export; validates the schema version.
DependenceGraph read_graph_json(const std::string& text);

bool operator==(const DependenceGraph& a, const DependenceGraph& b);

}  // namespace msdg
