#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

struct VertexPartition {
  std::vector<std::vector<int>> blocks;
  int size() const { return static_cast<int>(blocks.size()); }
  /// Disjoint, non-empty and covering 0..n-1.
  bool is_valid(int n) const;
};

/// Exact vertex connectivity; K_n gives n-1, a disconnected graph 0.
int vertex_connectivity(const ColouredGraph& g);

/// A minimum vertex cut: the first pair in scan order achieving the
/// connectivity, cut taken on the source side. Empty for complete graphs
/// and for disconnected graphs.
std::vector<int> min_vertex_cut(const ColouredGraph& g);

struct PartitionAudit {
  int threshold = 0;  // ceil(k^2 / 16n)
  std::vector<int> connectivity;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

PartitionAudit audit_partition(const ColouredGraph& h, const VertexPartition& part, int k);

/// Splits along minimum cuts until every block is ceil(k^2/16n)-connected.
/// Throws ContractError if the result fails its audit.
VertexPartition highly_connected_partition(const ColouredGraph& h, int k);

inline constexpr int kSuzukiExactLimit = 12;

struct CriterionResult {
  bool holds = true;
  VertexPartition witness;  // a partition with too few crossing colours
};

/// Every partition into s >= 2 parts has crossing edges of >= s-1 colours.
CriterionResult suzuki_check(const ColouredGraph& g);

/// Rainbow spanning tree as edge ids of g, or nullopt if none exists.
std::optional<std::vector<int>> find_rainbow_spanning_tree(const ColouredGraph& g);

/// Every pair of blocks has at least 2t crossing edges.
bool check_crossing_edges(const ColouredGraph& g, const VertexPartition& part, int t);

}  // namespace rainbow
