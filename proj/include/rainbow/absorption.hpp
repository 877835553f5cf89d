#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rainbow/embedder.hpp"
#include "rainbow/exposure.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/rng.hpp"
#include "rainbow/tree.hpp"

namespace rainbow {

/// R = pi(R') with colours carried along: psi(pi(u)pi(v)) = psi'(uv).
struct ShiftedColouredGraph {
  ColouredGraph base;
  std::vector<int> perm;  // vertex of R' -> vertex of R
  ColouredGraph shifted;
};

ShiftedColouredGraph apply_shift(const ColouredGraph& base, std::vector<int> perm);
ShiftedColouredGraph randomness_shift(const ColouredGraph& base, RandomSource& rng);

/// (delta/(4d))^(d+1) / (10 d^2).
double paper_spanning_eps(double delta, int d);
/// (delta/(4d))^(d+1) * n / (5 d^2), the lower bound on |B_j(u,v)|.
double large_buv_bound(double delta, int d, int n);

/// Random split of G \ E(R) into spanning edge-disjoint H_0..H_{d-1}.
struct EdgePartition {
  bool ok = false;
  std::string failure;  // "precondition" or "budget"
  int parts = 0;
  int attempts = 0;
  ColouredGraph host;              // G \ E(R)
  std::vector<int> part_of;        // per edge id of host
  std::vector<int> min_degrees;    // per part
  std::vector<std::vector<std::vector<int>>> adj;  // adj[j][v], sorted

  bool in_part(int a, int b, int j) const;
  std::span<const int> neighbours(int j, int v) const { return adj[j][v]; }
};

EdgePartition partition_edge_set(const ColouredGraph& g_minus_r, int d, double delta,
                                 RandomSource& rng, int budget = 50);

/// Host vertex -> its neighbours in the currently embedded tree.
using TreeAdjacency = std::vector<std::vector<int>>;

/// B_j(u,v) = { x in N_{H_j}(u) and in the absorber set :
///              every tree neighbour of x lies in N_{H_j}(v) }, ascending.
std::vector<int> compute_B(const EdgePartition& parts, const std::vector<char>& absorbers,
                           const TreeAdjacency& tree_adj, int u, int v, int j);

struct AbsorptionState {
  int n = 0;
  int palette = 0;
  std::vector<int> f;      // node of T -> vertex, -1 while unembedded
  std::vector<int> f_inv;  // vertex -> node of T, -1 while unused
  TreeAdjacency tree_adj;
  std::unordered_map<std::uint64_t, int> edge_colour;  // current tree edges
  std::vector<int> colour_count;
  std::vector<char> absorber;       // absorber vertices f(I0)
  std::vector<char> used_absorber;
  std::vector<int> used;            // x_1, x_2, ... in order

  void add_edge(int a, int b, int colour);
  void remove_edge(int a, int b);
};

struct AbsorbOutcome {
  bool ok = false;
  int j_star = -1;   // 0-based part index
  int b_full = 0;    // |B_j*(u,v)|
  int b_avail = 0;   // after removing used absorbers
  int chosen = -1;
  int exposed = 0;
};

/// Absorbs leftover vertex v as the image of v_node, whose embedded
/// T-neighbour is u_node. Throws StructuralError when every part already
/// has an exposed edge from f(u_node) to the absorber set.
AbsorbOutcome absorb_step(AbsorptionState& st, const EdgePartition& parts, ExposureLedger& ledger,
                          int v, int u_node, int v_node);

std::string format_absorb_line(int i, const AbsorbOutcome& out);

/// Direct assertions on the state: rainbow, the image of the embedded node
/// set is the induced subtree of T, and tree_adj matches it.
std::vector<std::string> check_absorption_state(const AbsorptionState& st, const Tree& t);

struct SpanningConfig {
  double p = 0.0;
  double delta = 0.4;
  double alpha = 0.25;
  int d = 3;
  std::optional<double> eps_override;
  double r_degree_c = 3.0;  // flags Delta(R) > c ln n
  int partition_budget = 50;
  PipelineKnobs knobs;
};

struct SpanningResult {
  bool ok = false;
  std::string failed_stage;
  std::vector<int> embedding;
  std::vector<StageRecord> trace;
  std::vector<std::string> absorb_lines;
  double eps = 0.0;
  double eps_paper = 0.0;
  int leftover = 0;
  int absorbed = 0;
  int r_max_degree = 0;
  bool r_degree_violation = false;
  AlmostSpanningResult almost;
  std::vector<std::string> validity_problems;
  // On success: the shifted random part R, the colour of each edge of t in
  // t.edges() order, and how many of those were never exposed by a ledger.
  ColouredGraph random_part;
  std::vector<int> edge_colours;
  int unexposed_edges = 0;
};

SpanningResult embed_spanning(const ColouredGraph& g, const Tree& t, const SpanningConfig& cfg,
                              RandomSource& rng);

struct BStatistics {
  int samples = 0;
  int min_size = 0;
  double mean_size = 0.0;
  double bound = 0.0;
  int below_bound = 0;
};

BStatistics measure_B_statistics(const EdgePartition& parts, const std::vector<char>& absorbers,
                                 const TreeAdjacency& tree_adj, double delta, int d, int samples,
                                 RandomSource& rng);

}  // namespace rainbow
