#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Tree on nodes 0..m-1. Construction validates connectivity and the edge
/// count; the degree bound is a property of the caller's context.
class Tree {
 public:
  Tree() = default;
  static Tree from_edges(int m, std::vector<Edge> edges);
  static Tree single_node() { return from_edges(1, {}); }
  static Tree path(int m);
  static Tree star(int leaves);

  int size() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbours(int x) const { return adj_[x]; }
  int degree(int x) const { return static_cast<int>(adj_[x].size()); }
  int max_degree() const;
  bool has_edge(int a, int b) const;

  /// parent[x] in the BFS tree from root (-1 for the root), and BFS order.
  std::vector<int> parents(int root, std::vector<int>* order = nullptr) const;
  std::vector<int> distances_from(int x) const;

 private:
  int m_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

Tree gen_random_bounded_tree(int m, int d, RandomSource& rng);

// Tree text format: "m" then m-1 lines "parent child" (BFS from node 0).
void write_tree(std::ostream& out, const Tree& t);
Tree read_tree(std::istream& in);

struct TrimResult {
  Tree subtree;                  // nodes relabelled 0..l-1
  std::vector<int> to_original;  // subtree node -> node of T
  std::vector<int> to_subtree;   // node of T -> subtree node, or -1
  std::vector<int> removed;      // nodes of T in deletion order
};

/// Deletes uniformly random leaves until `target` nodes remain.
TrimResult trim_to_size(const Tree& t, int target, RandomSource& rng);

struct PieceLink {
  int inner = -1;  // node in this piece
  int outer = -1;  // its neighbour in an earlier piece
};

/// Ordered split of a tree into subtrees T'_1..T'_s where each later piece
/// hangs off the union of the earlier ones by exactly one edge.
struct TreeDecomposition {
  double lower = 0.0;  // xi*n/d
  double upper = 0.0;  // xi*n
  std::vector<std::vector<int>> pieces;
  std::vector<int> piece_of;
  std::vector<PieceLink> links;  // links[0] unused
  int count() const { return static_cast<int>(pieces.size()); }
};

TreeDecomposition decompose_tree(const Tree& t, int d, double eps, double xi,
                                 int n);
/// Every violated decomposition invariant as a message; empty when valid.
std::vector<std::string> validate_decomposition(const Tree& t,
                                                const TreeDecomposition& dec);
void write_decomposition(std::ostream& out, const TreeDecomposition& dec);

/// T_i = T[V(T'_i) u Z_i], relabelled. Local nodes list the piece first.
struct AugmentedPiece {
  Tree tree;
  std::vector<int> nodes;   // local -> node of T
  std::optional<int> root;  // local index of the pre-embedded root (i >= 2)
};

struct RootSets {
  std::vector<std::vector<int>> z;  // z[i] for every piece; z.back() empty
  std::vector<AugmentedPiece> augmented;
};

RootSets compute_root_sets(const Tree& t, const TreeDecomposition& dec);

int i0_target(int n, int d, double eps);
/// Greedy absorber support: pairwise T0-distance >= 3, closed T-neighbourhood
/// inside T0, exactly i0_target(n, d, eps) nodes. Returns nodes of T.
std::vector<int> build_I0(const Tree& t, const TrimResult& trim, int d,
                          double eps);

}  // namespace rainbow
