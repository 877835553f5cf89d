#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

/// l1(r, C) = 2 e^4 r^2 ln C: minimum-degree threshold of the EXPAND family.
double ell1(int r, double C);
/// l2(eta, d, k) = eta k / (40 d^2 ln(2/eta)): threshold of the rooted
/// embedding theorem.
double ell2(double eta, int d, double k);

struct ExpandParams {
  double theta = 0.25;  // fraction of vertices the effective expander may drop
  double C = 2.0;       // degree band [C, 10C]
  double eta = 0.2;     // sets up to eta*n must expand
  int r = 3;            // by a factor r
  double ell1() const { return rainbow::ell1(r, C); }
  /// Violated preconditions of the a.a.s. membership lemma, as messages.
  /// Desk-scale runs routinely violate some; callers record them.
  std::vector<std::string> lemma_violations() const;
};

enum class CheckMode { exact, sampled };

struct CheckOptions {
  CheckMode mode = CheckMode::exact;
  int trials_per_size = 64;  // sampled mode only
  std::uint64_t seed = 0;
};

inline constexpr int kExactExpanderLimit = 24;
inline constexpr int kExactCoreLimit = 18;

/// Outcome of an expansion check. In sampled mode `holds` without
/// `certified` only means no sampled set refuted the property.
struct ExpansionResult {
  bool holds = true;
  bool certified = true;
  std::vector<int> witness;        // violating X (vertex ids of the input)
  std::vector<int> witness_scope;  // induced H'' containing it, if relevant
};

/// Largest |X| that must expand: floor(eta * n) with a rounding guard.
int expansion_limit(double eta, int n);

ExpansionResult is_eta_r_expander(const ColouredGraph& g, double eta, int r,
                                  const CheckOptions& opts = {});

/// Vertices of the largest induced subgraph with minimum degree >= k.
std::vector<int> degree_core(const ColouredGraph& g, double k);

/// Every induced H'' with min degree >= ell1 is an (eta, r)-expander.
ExpansionResult verify_expand_core(const ColouredGraph& h, double ell1,
                                   double eta, int r,
                                   const CheckOptions& opts = {});

struct EffectiveExpander {
  bool ok = false;
  std::string failed_item;     // "item1", "item2" or "item3" on failure
  ColouredGraph graph;         // on local vertices 0..k-1
  std::vector<int> vertices;   // local -> vertex of H
  int removed_vertices = 0;
  int removed_edges = 0;
  ExpansionResult expansion;
};

/// Peels vertices of degree < C and trims degrees above 10C, then checks the
/// three EXPAND items on what is left.
EffectiveExpander find_effective_expander(const ColouredGraph& h,
                                          const ExpandParams& params,
                                          const CheckOptions& opts = {});

/// H' plus a new vertex h.n() joined to `attach`. Needs at least (d+2)^2
/// attachment edges. Colours are required iff h is coloured.
ColouredGraph degrade_attach(const ColouredGraph& h, std::span<const int> attach,
                             int d, std::span<const int> attach_colours = {});

}  // namespace rainbow
