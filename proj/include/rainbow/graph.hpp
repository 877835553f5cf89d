#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rainbow/rng.hpp"

namespace rainbow {

/// Undirected edge stored canonically with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

Edge make_edge(int a, int b);

inline std::uint64_t pair_key(int a, int b) {
  auto lo = static_cast<std::uint32_t>(a < b ? a : b);
  auto hi = static_cast<std::uint32_t>(a < b ? b : a);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

/// Simple undirected graph on 0..n-1 with an optional total edge colouring
/// over [0, palette) and optional per-edge flags marking the random part of
/// a perturbed graph. Immutable once built; edges are kept sorted.
class ColouredGraph {
 public:
  ColouredGraph() = default;
  explicit ColouredGraph(int n);

  static ColouredGraph from_edges(int n, std::vector<Edge> edges);
  static ColouredGraph from_coloured_edges(int n, std::vector<Edge> edges,
                                           std::vector<int> colours,
                                           int palette);

  int n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbours(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int min_degree() const;
  int max_degree() const;

  std::optional<int> edge_id(int a, int b) const;
  bool has_edge(int a, int b) const { return edge_id(a, b).has_value(); }

  bool is_coloured() const { return palette_ > 0; }
  int palette() const { return palette_; }
  const std::vector<int>& colours() const { return colours_; }
  int colour(int id) const { return colours_[id]; }
  std::optional<int> colour_of(int a, int b) const;

  bool has_random_flags() const { return !random_.empty(); }
  const std::vector<std::uint8_t>& random_flags() const { return random_; }
  bool in_random_part(int id) const { return !random_.empty() && random_[id]; }

  ColouredGraph with_colours(std::vector<int> colours, int palette) const;
  ColouredGraph uncoloured() const;
  ColouredGraph with_random_flags(std::vector<std::uint8_t> flags) const;
  /// Edges not flagged as random, i.e. G \ E(R) for a perturbed graph.
  ColouredGraph without_random_part() const;
  /// Induced subgraph relabelled so that vertices[i] becomes i.
  ColouredGraph induced(std::span<const int> vertices) const;

 private:
  void build_index();

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<int> colours_;
  int palette_ = 0;
  std::vector<std::uint8_t> random_;
};

enum class SeedKind { complete, multipartite, clique_union, random_supergraph };

struct SeedSpec {
  SeedKind kind = SeedKind::complete;
  int parts = 2;          // multipartite / clique_union
  double density = 0.0;   // random_supergraph base density; 0 picks delta
};

SeedKind parse_seed_kind(const std::string& name);
std::string to_string(SeedKind kind);

ColouredGraph gen_gnp(int n, double p, RandomSource& rng);
ColouredGraph gen_seed_graph(int n, double delta, const SeedSpec& spec,
                             RandomSource& rng);
/// G union G(n,p), with every edge of the binomial part flagged.
ColouredGraph perturb(const ColouredGraph& g, double p, RandomSource& rng);
ColouredGraph uniform_colouring(const ColouredGraph& g, int palette,
                                RandomSource& rng);

bool is_rainbow(const ColouredGraph& g, std::span<const Edge> subset);
int distinct_colours(const ColouredGraph& g, std::span<const Edge> subset);
std::vector<int> external_neighbourhood(const ColouredGraph& g,
                                        std::span<const int> x);

}  // namespace rainbow
