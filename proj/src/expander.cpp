#include "rainbow/expander.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "rainbow/errors.hpp"

namespace rainbow {

double ell1(int r, double C) {
  return 2.0 * std::exp(4.0) * r * r * std::log(C);
}

double ell2(double eta, int d, double k) {
  return eta * k / (40.0 * d * d * std::log(2.0 / eta));
}

std::vector<std::string> ExpandParams::lemma_violations() const {
  std::vector<std::string> out;
  if (!(theta > 0.0 && theta < 0.5)) out.push_back("theta outside (0,1/2)");
  if (r < 3) out.push_back("r < 3");
  if (!(eta > 0.0 && eta <= 1.0 / (r + 2) + 1e-12)) out.push_back("eta > 1/(r+2)");
  if (!(C > 1.0)) out.push_back("C <= 1");
  if (theta > 0.0 && C < 50.0 / theta) out.push_back("C < 50/theta");
  if (C > 1.0 && C < ell1()) out.push_back("C < l1(r,C)");
  return out;
}

int expansion_limit(double eta, int n) {
  if (eta <= 0.0 || n <= 0) return 0;
  return static_cast<int>(std::floor(eta * n + 1e-9));
}

namespace {

using Mask = std::uint32_t;

std::vector<Mask> adjacency_masks(const ColouredGraph& g) {
  std::vector<Mask> adj(g.n(), 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= Mask{1} << e.v;
    adj[e.v] |= Mask{1} << e.u;
  }
  return adj;
}

std::vector<int> mask_to_vertices(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

// Depth-first search over subsets X of `verts` with 1 <= |X| <= limit,
// looking for |(N(X) & scope) \ X| < r |X|. Returns the violating mask or 0.
class SubsetSearch {
 public:
  SubsetSearch(const std::vector<Mask>& adj, Mask scope, int limit, int r)
      : adj_(adj), scope_(scope), limit_(limit), r_(r), verts_(mask_to_vertices(scope)) {}

  Mask run() { return limit_ <= 0 ? 0 : dfs(0, 0, 0, 0); }

 private:
  Mask dfs(std::size_t start, Mask x, Mask nbrs, int size) {
    for (std::size_t i = start; i < verts_.size(); ++i) {
      int v = verts_[i];
      Mask nx = x | (Mask{1} << v);
      Mask nn = nbrs | (adj_[v] & scope_);
      int t = size + 1;
      if (std::popcount(nn & ~nx) < r_ * t) return nx;
      if (t < limit_) {
        if (Mask found = dfs(i + 1, nx, nn, t)) return found;
      }
    }
    return 0;
  }

  const std::vector<Mask>& adj_;
  Mask scope_;
  int limit_;
  int r_;
  std::vector<int> verts_;
};

bool min_degree_at_least(const std::vector<Mask>& adj, Mask scope, double k) {
  for (Mask m = scope; m; m &= m - 1) {
    int v = std::countr_zero(m);
    if (std::popcount(adj[v] & scope) < k) return false;
  }
  return true;
}

ExpansionResult sampled_expander(const ColouredGraph& g, double eta, int r,
                                 const CheckOptions& opts, RandomSource& rng) {
  ExpansionResult res;
  res.certified = false;
  const int n = g.n();
  const int limit = expansion_limit(eta, n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<int> in_x(n, 0), hit(n, 0);
  int epoch = 0;
  for (int t = 1; t <= limit; ++t) {
    for (int trial = 0; trial < opts.trials_per_size; ++trial) {
      // Partial Fisher-Yates for a uniform t-subset.
      for (int i = 0; i < t; ++i) {
        int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(perm[i], perm[j]);
      }
      ++epoch;
      for (int i = 0; i < t; ++i) in_x[perm[i]] = epoch;
      int gamma = 0;
      for (int i = 0; i < t; ++i)
        for (int w : g.neighbours(perm[i]))
          if (in_x[w] != epoch && hit[w] != epoch) {
            hit[w] = epoch;
            ++gamma;
          }
      if (gamma < r * t) {
        res.holds = false;
        res.witness.assign(perm.begin(), perm.begin() + t);
        std::sort(res.witness.begin(), res.witness.end());
        return res;
      }
    }
  }
  return res;
}

}  // namespace

ExpansionResult is_eta_r_expander(const ColouredGraph& g, double eta, int r,
                                  const CheckOptions& opts) {
  if (opts.mode == CheckMode::sampled) {
    RandomSource rng(opts.seed, 0x5a);
    return sampled_expander(g, eta, r, opts, rng);
  }
  if (g.n() > kExactExpanderLimit)
    throw CapacityError("exact expansion check limited to " +
                        std::to_string(kExactExpanderLimit) + " vertices");
  ExpansionResult res;
  auto adj = adjacency_masks(g);
  Mask all = g.n() == 32 ? ~Mask{0} : ((Mask{1} << g.n()) - 1);
  SubsetSearch search(adj, all, expansion_limit(eta, g.n()), r);
  if (Mask bad = search.run()) {
    res.holds = false;
    res.witness = mask_to_vertices(bad);
  }
  return res;
}

std::vector<int> degree_core(const ColouredGraph& g, double k) {
  const int n = g.n();
  std::vector<int> deg(n);
  std::vector<char> alive(n, 1);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] < k) {
      alive[v] = 0;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbours(v))
      if (alive[w] && --deg[w] < k) {
        alive[w] = 0;
        stack.push_back(w);
      }
  }
  std::vector<int> core;
  for (int v = 0; v < n; ++v)
    if (alive[v]) core.push_back(v);
  return core;
}

ExpansionResult verify_expand_core(const ColouredGraph& h, double l1,
                                   double eta, int r, const CheckOptions& opts) {
  ExpansionResult res;
  std::vector<int> core = degree_core(h, l1);
  if (core.empty()) return res;
  if (opts.mode == CheckMode::sampled) {
    res.certified = false;
    RandomSource rng(opts.seed, 0x3c);
    auto check = [&](const std::vector<int>& scope) {
      ColouredGraph sub = h.induced(scope);
      ExpansionResult part = sampled_expander(sub, eta, r, opts, rng);
      if (part.holds) return true;
      res.holds = false;
      for (int v : part.witness) res.witness.push_back(scope[v]);
      res.witness_scope = scope;
      return false;
    };
    if (!check(core)) return res;
    ColouredGraph core_graph = h.induced(core);
    for (int trial = 0; trial < opts.trials_per_size; ++trial) {
      double keep = 0.5 + 0.5 * rng.uniform01();
      std::vector<int> pick;
      for (int i = 0; i < core_graph.n(); ++i)
        if (rng.uniform01() < keep) pick.push_back(i);
      ColouredGraph sub = core_graph.induced(pick);
      std::vector<int> inner = degree_core(sub, l1);
      if (inner.empty()) continue;
      std::vector<int> scope;
      for (int v : inner) scope.push_back(core[pick[v]]);
      if (!check(scope)) return res;
    }
    return res;
  }
  if (h.n() > kExactCoreLimit)
    throw CapacityError("exact induced-subgraph enumeration limited to " +
                        std::to_string(kExactCoreLimit) + " vertices");
  auto adj = adjacency_masks(h);
  const int c = static_cast<int>(core.size());
  for (std::uint32_t sel = 1; sel < (std::uint32_t{1} << c); ++sel) {
    Mask scope = 0;
    for (std::uint32_t s = sel; s; s &= s - 1) scope |= Mask{1} << core[std::countr_zero(s)];
    if (!min_degree_at_least(adj, scope, l1)) continue;
    SubsetSearch search(adj, scope, expansion_limit(eta, std::popcount(scope)), r);
    if (Mask bad = search.run()) {
      res.holds = false;
      res.witness = mask_to_vertices(bad);
      res.witness_scope = mask_to_vertices(scope);
      return res;
    }
  }
  return res;
}

EffectiveExpander find_effective_expander(const ColouredGraph& h,
                                          const ExpandParams& params,
                                          const CheckOptions& opts) {
  if (!(params.C > 0.0) || !(params.theta >= 0.0) || params.r < 1 || !(params.eta > 0.0))
    throw ParameterError("find_effective_expander: malformed parameters");
  const int n = h.n();
  const double cap = 10.0 * params.C;
  std::vector<int> deg(n);
  std::vector<char> alive(n, 1);
  std::vector<char> edge_alive(h.edge_count(), 1);
  for (int v = 0; v < n; ++v) deg[v] = h.degree(v);
  EffectiveExpander out;
  auto kill_edge = [&](int a, int b) {
    int id = *h.edge_id(a, b);
    if (!edge_alive[id]) return;
    edge_alive[id] = 0;
    --deg[a];
    --deg[b];
    ++out.removed_edges;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!alive[v] || deg[v] >= params.C) continue;
      alive[v] = 0;
      ++out.removed_vertices;
      for (int w : h.neighbours(v)) kill_edge(v, w);
      changed = true;
    }
    for (int v = 0; v < n; ++v) {
      if (!alive[v] || deg[v] <= cap) continue;
      auto nb = h.neighbours(v);
      for (auto it = nb.rbegin(); it != nb.rend() && deg[v] > cap; ++it)
        if (alive[*it]) kill_edge(v, *it);
      changed = true;
    }
  }
  std::vector<int> local(n, -1);
  for (int v = 0; v < n; ++v)
    if (alive[v]) {
      local[v] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(v);
    }
  std::vector<Edge> edges;
  std::vector<int> colours;
  for (std::size_t id = 0; id < h.edge_count(); ++id) {
    if (!edge_alive[id]) continue;
    const Edge& e = h.edges()[id];
    edges.push_back({local[e.u], local[e.v]});
    if (h.is_coloured()) colours.push_back(h.colour(static_cast<int>(id)));
  }
  const int k = static_cast<int>(out.vertices.size());
  out.graph = h.is_coloured()
                  ? ColouredGraph::from_coloured_edges(k, std::move(edges), std::move(colours), h.palette())
                  : ColouredGraph::from_edges(k, std::move(edges));
  if (k == 0) {
    out.failed_item = "item2";
    return out;
  }
  if (out.removed_vertices > params.theta * n + 1e-9) {
    out.failed_item = "item1";
    return out;
  }
  for (int v = 0; v < k; ++v)
    if (out.graph.degree(v) < params.C || out.graph.degree(v) > cap)
      throw ContractError("effective expander left a vertex outside the degree band");
  out.expansion = verify_expand_core(out.graph, params.ell1(), params.eta, params.r, opts);
  if (!out.expansion.holds) {
    out.failed_item = "item3";
    return out;
  }
  out.ok = true;
  return out;
}

ColouredGraph degrade_attach(const ColouredGraph& h, std::span<const int> attach,
                             int d, std::span<const int> attach_colours) {
  if (d < 1) throw ParameterError("degrade_attach: d must be positive");
  if (static_cast<int>(attach.size()) < (d + 2) * (d + 2))
    throw ParameterError("degrade_attach: new vertex needs degree >= (d+2)^2");
  if (h.is_coloured() != !attach_colours.empty() ||
      (!attach_colours.empty() && attach_colours.size() != attach.size()))
    throw ParameterError("degrade_attach: attachment colours must match the graph");
  const int u = h.n();
  std::vector<Edge> edges = h.edges();
  std::vector<int> colours = h.colours();
  for (std::size_t i = 0; i < attach.size(); ++i) {
    if (attach[i] < 0 || attach[i] >= u) throw DomainError("degrade_attach: vertex out of range");
    edges.push_back({attach[i], u});
    if (h.is_coloured()) colours.push_back(attach_colours[i]);
  }
  if (h.is_coloured())
    return ColouredGraph::from_coloured_edges(u + 1, std::move(edges), std::move(colours), h.palette());
  return ColouredGraph::from_edges(u + 1, std::move(edges));
}

}  // namespace rainbow
