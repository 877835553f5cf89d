#include "rainbow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rainbow/errors.hpp"

namespace rainbow {

Edge make_edge(int a, int b) {
  if (a == b) throw ParameterError("self-loop " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

ColouredGraph::ColouredGraph(int n) : n_(n), adj_(n < 0 ? 0 : n) {
  if (n < 0) throw ParameterError("vertex count must be non-negative");
}

ColouredGraph ColouredGraph::from_edges(int n, std::vector<Edge> edges) {
  ColouredGraph g(n);
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw ParameterError("edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw ParameterError("duplicate edge");
  g.edges_ = std::move(edges);
  g.build_index();
  return g;
}

ColouredGraph ColouredGraph::from_coloured_edges(int n, std::vector<Edge> edges,
                                                 std::vector<int> colours,
                                                 int palette) {
  if (edges.size() != colours.size())
    throw ParameterError("colouring domain must equal the edge set");
  if (palette < 1) throw ParameterError("palette size must be at least 1");
  for (int c : colours)
    if (c < 0 || c >= palette) throw ParameterError("colour outside palette");
  for (auto& e : edges) e = make_edge(e.u, e.v);
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  std::vector<Edge> sorted_edges;
  std::vector<int> sorted_colours;
  sorted_edges.reserve(edges.size());
  sorted_colours.reserve(edges.size());
  for (auto i : order) {
    sorted_edges.push_back(edges[i]);
    sorted_colours.push_back(colours[i]);
  }
  ColouredGraph g = from_edges(n, std::move(sorted_edges));
  g.colours_ = std::move(sorted_colours);
  g.palette_ = palette;
  return g;
}

void ColouredGraph::build_index() {
  adj_.assign(n_, {});
  index_.clear();
  index_.reserve(edges_.size() * 2);
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    const Edge& e = edges_[id];
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
    index_.emplace(pair_key(e.u, e.v), id);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

int ColouredGraph::min_degree() const {
  if (n_ == 0) return 0;
  int best = degree(0);
  for (int v = 1; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

int ColouredGraph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

std::optional<int> ColouredGraph::edge_id(int a, int b) const {
  if (a == b) return std::nullopt;
  auto it = index_.find(pair_key(a, b));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> ColouredGraph::colour_of(int a, int b) const {
  auto id = edge_id(a, b);
  if (!id || !is_coloured()) return std::nullopt;
  return colours_[*id];
}

ColouredGraph ColouredGraph::with_colours(std::vector<int> colours,
                                          int palette) const {
  if (colours.size() != edges_.size())
    throw ParameterError("colouring domain must equal the edge set");
  if (palette < 1) throw ParameterError("palette size must be at least 1");
  for (int c : colours)
    if (c < 0 || c >= palette) throw ParameterError("colour outside palette");
  ColouredGraph g = *this;
  g.colours_ = std::move(colours);
  g.palette_ = palette;
  return g;
}

ColouredGraph ColouredGraph::uncoloured() const {
  ColouredGraph g = *this;
  g.colours_.clear();
  g.palette_ = 0;
  return g;
}

ColouredGraph ColouredGraph::with_random_flags(
    std::vector<std::uint8_t> flags) const {
  if (flags.size() != edges_.size())
    throw ParameterError("random flags must cover the edge set");
  ColouredGraph g = *this;
  g.random_ = std::move(flags);
  return g;
}

ColouredGraph ColouredGraph::without_random_part() const {
  std::vector<Edge> kept;
  std::vector<int> kept_colours;
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    if (in_random_part(static_cast<int>(id))) continue;
    kept.push_back(edges_[id]);
    if (is_coloured()) kept_colours.push_back(colours_[id]);
  }
  if (is_coloured())
    return from_coloured_edges(n_, std::move(kept), std::move(kept_colours),
                               palette_);
  return from_edges(n_, std::move(kept));
}

ColouredGraph ColouredGraph::induced(std::span<const int> vertices) const {
  std::vector<int> local(n_, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    int v = vertices[i];
    if (v < 0 || v >= n_) throw DomainError("induced: vertex out of range");
    if (local[v] != -1) throw ParameterError("induced: repeated vertex");
    local[v] = static_cast<int>(i);
  }
  std::vector<Edge> sub;
  std::vector<int> sub_colours;
  std::vector<std::uint8_t> sub_flags;
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    if (local[e.u] < 0 || local[e.v] < 0) continue;
    sub.push_back(make_edge(local[e.u], local[e.v]));
    if (is_coloured()) sub_colours.push_back(colours_[id]);
    if (has_random_flags()) sub_flags.push_back(random_[id]);
  }
  int m = static_cast<int>(vertices.size());
  // Keep colours and flags aligned through the sort inside the builders.
  std::vector<std::size_t> order(sub.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sub[a] < sub[b]; });
  std::vector<Edge> se;
  std::vector<int> sc;
  std::vector<std::uint8_t> sf;
  for (auto i : order) {
    se.push_back(sub[i]);
    if (is_coloured()) sc.push_back(sub_colours[i]);
    if (has_random_flags()) sf.push_back(sub_flags[i]);
  }
  ColouredGraph g = from_edges(m, std::move(se));
  if (is_coloured()) {
    g.colours_ = std::move(sc);
    g.palette_ = palette_;
  }
  if (has_random_flags()) g.random_ = std::move(sf);
  return g;
}

SeedKind parse_seed_kind(const std::string& name) {
  if (name == "complete") return SeedKind::complete;
  if (name == "multipartite") return SeedKind::multipartite;
  if (name == "clique-union") return SeedKind::clique_union;
  if (name == "random-supergraph") return SeedKind::random_supergraph;
  throw ParameterError("unknown seed kind '" + name + "'");
}

std::string to_string(SeedKind kind) {
  switch (kind) {
    case SeedKind::complete: return "complete";
    case SeedKind::multipartite: return "multipartite";
    case SeedKind::clique_union: return "clique-union";
    case SeedKind::random_supergraph: return "random-supergraph";
  }
  return "?";
}

ColouredGraph gen_gnp(int n, double p, RandomSource& rng) {
  if (n < 0) throw ParameterError("gen_gnp: n must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gen_gnp: p must lie in [0,1]");
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return ColouredGraph::from_edges(n, {});
  if (p < 0.1) {
    // Geometric skipping over the pairs (u, v), u < v, ordered by v then u.
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uint64_t idx = rng.geometric(p);
    int v = 1;
    std::uint64_t row_start = 0;  // index of pair (0, v)
    while (idx < total) {
      while (idx >= row_start + static_cast<std::uint64_t>(v)) {
        row_start += v;
        ++v;
      }
      edges.push_back({static_cast<int>(idx - row_start), v});
      std::uint64_t skip = rng.geometric(p);
      if (skip >= total) break;
      idx += skip + 1;
    }
  } else {
    for (int v = 1; v < n; ++v)
      for (int u = 0; u < v; ++u)
        if (rng.bernoulli(p)) edges.push_back({u, v});
  }
  return ColouredGraph::from_edges(n, std::move(edges));
}

namespace {

std::vector<int> part_sizes(int n, int parts) {
  std::vector<int> sizes(parts, n / parts);
  for (int i = 0; i < n % parts; ++i) ++sizes[i];
  return sizes;
}

}  // namespace

ColouredGraph gen_seed_graph(int n, double delta, const SeedSpec& spec,
                             RandomSource& rng) {
  if (n < 1) throw ParameterError("gen_seed_graph: n must be positive");
  if (!(delta > 0.0 && delta < 1.0))
    throw ParameterError("gen_seed_graph: delta must lie in (0,1)");
  const int need = static_cast<int>(std::ceil(delta * n - 1e-9));
  std::vector<Edge> edges;
  switch (spec.kind) {
    case SeedKind::complete:
      for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u) edges.push_back({u, v});
      break;
    case SeedKind::multipartite:
    case SeedKind::clique_union: {
      if (spec.parts < 1 || spec.parts > n)
        throw ParameterError("gen_seed_graph: part count out of range");
      auto sizes = part_sizes(n, spec.parts);
      std::vector<int> part(n);
      for (int i = 0, v = 0; i < spec.parts; ++i)
        for (int j = 0; j < sizes[i]; ++j) part[v++] = i;
      int smallest = *std::min_element(sizes.begin(), sizes.end());
      int largest = *std::max_element(sizes.begin(), sizes.end());
      bool multi = spec.kind == SeedKind::multipartite;
      int min_deg = multi ? n - largest : smallest - 1;
      if (min_deg < need)
        throw ParameterError("gen_seed_graph: " + to_string(spec.kind) +
                             " with " + std::to_string(spec.parts) +
                             " parts has minimum degree " +
                             std::to_string(min_deg) + " < " +
                             std::to_string(need));
      for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
          if ((part[u] == part[v]) != multi) edges.push_back({u, v});
      break;
    }
    case SeedKind::random_supergraph: {
      if (need > n - 1)
        throw ParameterError("gen_seed_graph: delta*n exceeds n-1");
      double q = spec.density > 0.0 ? spec.density : delta;
      if (q > 1.0) throw ParameterError("gen_seed_graph: density above 1");
      ColouredGraph base = gen_gnp(n, q, rng);
      std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
      std::vector<int> deg(n, 0);
      for (const Edge& e : base.edges()) {
        adj[e.u][e.v] = adj[e.v][e.u] = 1;
        ++deg[e.u];
        ++deg[e.v];
      }
      std::vector<int> others;
      for (int v = 0; v < n; ++v) {
        if (deg[v] >= need) continue;
        others.clear();
        for (int w = 0; w < n; ++w)
          if (w != v && !adj[v][w]) others.push_back(w);
        rng.shuffle(std::span<int>(others));
        for (int w : others) {
          if (deg[v] >= need) break;
          adj[v][w] = adj[w][v] = 1;
          ++deg[v];
          ++deg[w];
        }
      }
      for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
          if (adj[u][v]) edges.push_back({u, v});
      break;
    }
  }
  return ColouredGraph::from_edges(n, std::move(edges));
}

ColouredGraph perturb(const ColouredGraph& g, double p, RandomSource& rng) {
  ColouredGraph r = gen_gnp(g.n(), p, rng);
  std::vector<Edge> all = g.edges();
  for (const Edge& e : r.edges())
    if (!g.has_edge(e.u, e.v)) all.push_back(e);
  ColouredGraph out = ColouredGraph::from_edges(g.n(), std::move(all));
  std::vector<std::uint8_t> flags(out.edge_count(), 0);
  for (const Edge& e : r.edges()) flags[*out.edge_id(e.u, e.v)] = 1;
  return out.with_random_flags(std::move(flags));
}

ColouredGraph uniform_colouring(const ColouredGraph& g, int palette,
                                RandomSource& rng) {
  if (palette < 1) throw ParameterError("palette size must be at least 1");
  std::vector<int> colours(g.edge_count());
  for (auto& c : colours)
    c = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(palette)));
  return g.with_colours(std::move(colours), palette);
}

int distinct_colours(const ColouredGraph& g, std::span<const Edge> subset) {
  if (!g.is_coloured()) throw DomainError("graph carries no colouring");
  std::vector<int> seen;
  seen.reserve(subset.size());
  for (const Edge& e : subset) {
    auto c = g.colour_of(e.u, e.v);
    if (!c)
      throw DomainError("edge " + std::to_string(e.u) + "-" +
                        std::to_string(e.v) + " not in graph");
    seen.push_back(*c);
  }
  std::sort(seen.begin(), seen.end());
  return static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

bool is_rainbow(const ColouredGraph& g, std::span<const Edge> subset) {
  return distinct_colours(g, subset) == static_cast<int>(subset.size());
}

std::vector<int> external_neighbourhood(const ColouredGraph& g,
                                        std::span<const int> x) {
  std::vector<char> in_x(g.n(), 0), hit(g.n(), 0);
  for (int v : x) {
    if (v < 0 || v >= g.n()) throw DomainError("vertex out of range");
    in_x[v] = 1;
  }
  for (int v : x)
    for (int w : g.neighbours(v))
      if (!in_x[w]) hit[w] = 1;
  std::vector<int> out;
  for (int v = 0; v < g.n(); ++v)
    if (hit[v]) out.push_back(v);
  return out;
}

}  // namespace rainbow
