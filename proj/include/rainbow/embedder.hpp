#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rainbow/errors.hpp"
#include "rainbow/expander.hpp"
#include "rainbow/exposure.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/rng.hpp"
#include "rainbow/sparsify.hpp"
#include "rainbow/tree.hpp"

namespace rainbow {

/// Tunables that the asymptotic argument leaves as "sufficiently small"
/// constants, plus engineering knobs for the finite-n pipeline.
struct PipelineKnobs {
  double c_beta = 0.01;
  double c_rho = 0.01;
  double first_budget = 0.25;   // m_1 = first_budget * n
  double later_budget = 0.25;   // m_i = later_budget * eps * n for i >= 2
  double target_degree = 0.0;   // > 0: m_i = target_degree * |X_i| / 2 instead
  bool enforce_expansion = true;   // false: item3 refutations are recorded only
  int root_attempts = 8;           // root vertices tried for the unrooted T_1
  int rollback_factor = 1;         // rollback budget = factor * v(T_i)
  CheckOptions expansion_check{CheckMode::sampled, 8, 0};
};

struct PipelineParams {
  double eps = 0.0;
  int d = 0;
  int n = 0;
  double zeta = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double xi = 0.0;          // upper piece size as a fraction of n
  int reservoir_size = 0;   // floor(rho * n)
  int s_bound = 0;          // bound on the number of pieces
  double block_factor() const { return 1.0 + 1.5 * zeta; }
  int block_size(int tree_nodes) const;
};

class InfeasibleParameters : public ParameterError {
 public:
  InfeasibleParameters(const std::string& what, long long min_n)
      : ParameterError(what), min_n_(min_n) {}
  long long min_n() const { return min_n_; }

 private:
  long long min_n_;
};

PipelineParams derive_parameters(double eps, int d, int n,
                                 const PipelineKnobs& knobs = {});

struct RootedEmbedding {
  bool ok = false;
  std::vector<int> map;  // tree node -> host vertex
  int rollbacks = 0;
};

/// Level-order greedy embedding with bounded chronological rollback.
/// Without a root vertex, up to `root_attempts` high-degree vertices are
/// tried as the image of root_node.
RootedEmbedding embed_rooted_tree(const ColouredGraph& h, const Tree& t,
                                  int root_node, std::optional<int> root_vertex,
                                  RandomSource& rng, int rollback_budget = -1,
                                  int root_attempts = 8);

struct RootEdgeSelection {
  bool ok = false;
  std::vector<int> targets;  // chosen v, in scan order
  std::vector<int> colours;
  int exposed = 0;
  int present = 0;
};

/// Exposes every pair r-v for v in `candidates` and keeps a rainbow set of
/// up to `needed` edges with colours in `fresh`.
RootEdgeSelection select_root_edges(ExposureLedger& ledger, int r,
                                    std::span<const int> candidates,
                                    const ColourMask& fresh, int needed);

int colour_coverage(std::span<const int> colours, const ColourMask& allowed);

struct StageRecord {
  std::string stage;
  bool ok = true;
  std::string detail;
};

std::string format_trace_line(const StageRecord& rec);

using ColourLookup = std::function<std::optional<int>(int, int)>;

/// Validity suite for an embedding of t into a coloured host on n vertices:
/// injectivity, edge presence, global rainbow, and the image re-derived as a
/// tree isomorphic to t. Returns the violations found.
std::vector<std::string> check_embedding(const Tree& t, std::span<const int> f,
                                         int n, const ColourLookup& colour,
                                         bool spanning = false);

struct AlmostSpanningResult {
  bool ok = false;
  std::string failed_stage;
  std::vector<int> embedding;  // tree node -> host vertex
  std::vector<StageRecord> trace;
  PipelineParams params;
  int pieces = 0;
  int reservoir_used = 0;
  int reservoir_bound = 0;
  int short_root_stages = 0;  // stages attached with fewer than (d+2)^2 edges
  std::vector<std::string> lemma_violations;
  std::vector<std::string> validity_problems;
};

/// Rainbow embedding of t into the host behind `ledger`.
AlmostSpanningResult embed_almost_spanning(ExposureLedger& ledger, const Tree& t,
                                           double eps, int d, RandomSource& rng,
                                           const PipelineKnobs& knobs = {});

/// Same, on G(n,p) uniformly coloured from [palette].
AlmostSpanningResult embed_almost_spanning(int n, double p, int palette,
                                           const Tree& t, double eps, int d,
                                           RandomSource& rng,
                                           const PipelineKnobs& knobs = {});

}  // namespace rainbow
