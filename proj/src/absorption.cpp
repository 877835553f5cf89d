#include "rainbow/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rainbow/errors.hpp"

namespace rainbow {

ShiftedColouredGraph apply_shift(const ColouredGraph& base, std::vector<int> perm) {
  if (!base.is_coloured()) throw ParameterError("randomness_shift: base graph must be coloured");
  const int n = base.n();
  if (static_cast<int>(perm.size()) != n) throw ParameterError("randomness_shift: permutation size");
  std::vector<char> hit(n, 0);
  for (int v : perm) {
    if (v < 0 || v >= n || hit[v]) throw ParameterError("randomness_shift: not a permutation");
    hit[v] = 1;
  }
  std::vector<Edge> edges;
  edges.reserve(base.edge_count());
  for (const Edge& e : base.edges()) edges.push_back(make_edge(perm[e.u], perm[e.v]));
  ShiftedColouredGraph out;
  out.shifted = ColouredGraph::from_coloured_edges(n, std::move(edges), base.colours(), base.palette());
  out.base = base;
  out.perm = std::move(perm);
  return out;
}

ShiftedColouredGraph randomness_shift(const ColouredGraph& base, RandomSource& rng) {
  std::vector<int> perm(base.n());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<int>(perm));
  return apply_shift(base, std::move(perm));
}

double paper_spanning_eps(double delta, int d) {
  if (!(delta > 0.0 && delta <= 1.0) || d < 1) throw ParameterError("paper_spanning_eps: bad arguments");
  return std::pow(delta / (4.0 * d), d + 1) / (10.0 * d * d);
}

double large_buv_bound(double delta, int d, int n) {
  if (!(delta > 0.0 && delta <= 1.0) || d < 1) throw ParameterError("large_buv_bound: bad arguments");
  return std::pow(delta / (4.0 * d), d + 1) * n / (5.0 * d * d);
}

bool EdgePartition::in_part(int a, int b, int j) const {
  auto id = host.edge_id(a, b);
  return id && part_of[*id] == j;
}

EdgePartition partition_edge_set(const ColouredGraph& g_minus_r, int d, double delta, RandomSource& rng,
                                 int budget) {
  if (d < 1) throw ParameterError("partition_edge_set: d must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("partition_edge_set: delta must lie in (0,1]");
  const int n = g_minus_r.n();
  EdgePartition out;
  out.parts = d;
  out.host = g_minus_r;
  if (n > 0 && g_minus_r.min_degree() < 0.9 * delta * n - 1e-9) {
    out.failure = "precondition";
    return out;
  }
  const double need = delta * n / (2.0 * d);
  const auto& edges = g_minus_r.edges();
  std::vector<std::vector<int>> deg(d, std::vector<int>(n));
  out.part_of.assign(edges.size(), 0);
  for (out.attempts = 1; out.attempts <= std::max(1, budget); ++out.attempts) {
    for (auto& row : deg) std::fill(row.begin(), row.end(), 0);
    for (std::size_t id = 0; id < edges.size(); ++id) {
      int j = d == 1 ? 0 : static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(d)));
      out.part_of[id] = j;
      ++deg[j][edges[id].u];
      ++deg[j][edges[id].v];
    }
    out.min_degrees.assign(d, n > 0 ? n : 0);
    for (int j = 0; j < d; ++j)
      for (int v = 0; v < n; ++v) out.min_degrees[j] = std::min(out.min_degrees[j], deg[j][v]);
    if (std::all_of(out.min_degrees.begin(), out.min_degrees.end(), [&](int m) { return m >= need - 1e-9; })) {
      out.ok = true;
      break;
    }
  }
  if (!out.ok) {
    out.attempts = std::max(1, budget);
    out.failure = "budget";
    return out;
  }
  out.adj.assign(d, std::vector<std::vector<int>>(n));
  for (std::size_t id = 0; id < edges.size(); ++id) {
    out.adj[out.part_of[id]][edges[id].u].push_back(edges[id].v);
    out.adj[out.part_of[id]][edges[id].v].push_back(edges[id].u);
  }
  for (auto& part : out.adj)
    for (auto& row : part) std::sort(row.begin(), row.end());
  return out;
}

std::vector<int> compute_B(const EdgePartition& parts, const std::vector<char>& absorbers,
                           const TreeAdjacency& tree_adj, int u, int v, int j) {
  if (u == v) throw ParameterError("compute_B: u and v must differ");
  std::vector<int> out;
  for (int x : parts.neighbours(j, u)) {
    if (!absorbers[x]) continue;
    bool all = true;
    for (int y : tree_adj[x])
      if (y == v || !parts.in_part(y, v, j)) {
        all = false;
        break;
      }
    if (all) out.push_back(x);
  }
  return out;
}

void AbsorptionState::add_edge(int a, int b, int colour) {
  tree_adj[a].push_back(b);
  tree_adj[b].push_back(a);
  edge_colour[pair_key(a, b)] = colour;
  ++colour_count[colour];
}

void AbsorptionState::remove_edge(int a, int b) {
  auto drop = [](std::vector<int>& row, int x) { row.erase(std::find(row.begin(), row.end(), x)); };
  drop(tree_adj[a], b);
  drop(tree_adj[b], a);
  auto it = edge_colour.find(pair_key(a, b));
  --colour_count[it->second];
  edge_colour.erase(it);
}

AbsorbOutcome absorb_step(AbsorptionState& st, const EdgePartition& parts, ExposureLedger& ledger, int v,
                          int u_node, int v_node) {
  AbsorbOutcome out;
  const int u = st.f[u_node];
  if (u < 0) throw ContractError("absorb_step: u' is not embedded");
  if (st.f_inv[v] != -1 || st.f[v_node] != -1) throw ContractError("absorb_step: v already embedded");

  for (int j = 0; j < parts.parts && out.j_star < 0; ++j) {
    bool clean = true;
    for (int x : parts.neighbours(j, u))
      if (st.absorber[x] && ledger.is_exposed(u, x)) {
        clean = false;
        break;
      }
    if (clean) out.j_star = j;
  }
  if (out.j_star < 0) throw StructuralError("absorb_step: every part has exposed edges at u");
  const int j = out.j_star;

  std::vector<int> full = compute_B(parts, st.absorber, st.tree_adj, u, v, j);
  std::vector<int> avail;
  for (int x : full)
    if (!st.used_absorber[x]) avail.push_back(x);
  out.b_full = static_cast<int>(full.size());
  out.b_avail = static_cast<int>(avail.size());
  if (out.b_avail < out.b_full - static_cast<int>(st.used.size()))
    throw ContractError("absorb_step: B shrank by more than the used absorbers");

  // Expose every candidate first; the choice then scans in ascending order.
  std::vector<std::vector<int>> cols(avail.size());
  for (std::size_t k = 0; k < avail.size(); ++k) {
    const int x = avail[k];
    auto c = ledger.expose(u, x);
    ++out.exposed;
    if (!c) throw ContractError("absorb_step: H-edge absent from the host");
    cols[k].push_back(*c);
    for (int y : st.tree_adj[x]) {
      auto cy = ledger.expose(y, v);
      ++out.exposed;
      if (!cy) throw ContractError("absorb_step: H-edge absent from the host");
      cols[k].push_back(*cy);
    }
  }
  for (std::size_t k = 0; k < avail.size() && out.chosen < 0; ++k) {
    auto cs = cols[k];
    std::sort(cs.begin(), cs.end());
    bool fresh = std::adjacent_find(cs.begin(), cs.end()) == cs.end();
    for (int c : cs) fresh = fresh && st.colour_count[c] == 0;
    if (fresh) out.chosen = static_cast<int>(k);
  }
  if (out.chosen < 0) return out;

  const int x = avail[out.chosen];
  const int z = st.f_inv[x];
  const std::vector<int> ys = st.tree_adj[x];
  for (int y : ys) st.remove_edge(x, y);
  for (std::size_t k = 0; k < ys.size(); ++k) st.add_edge(ys[k], v, cols[out.chosen][k + 1]);
  st.add_edge(u, x, cols[out.chosen][0]);
  st.f[z] = v;
  st.f_inv[v] = z;
  st.f[v_node] = x;
  st.f_inv[x] = v_node;
  st.used_absorber[x] = 1;
  st.used.push_back(x);
  out.chosen = x;
  out.ok = true;
  return out;
}

std::string format_absorb_line(int i, const AbsorbOutcome& out) {
  std::ostringstream s;
  s << "i=" << i << " j*=" << out.j_star + 1 << " |B|=" << out.b_avail << " chosen=";
  if (out.ok)
    s << out.chosen;
  else
    s << "fail";
  return s.str();
}

std::vector<std::string> check_absorption_state(const AbsorptionState& st, const Tree& t) {
  std::vector<std::string> problems;
  std::vector<int> nodes;
  for (int x = 0; x < t.size(); ++x)
    if (st.f[x] >= 0) nodes.push_back(x);
  std::vector<int> local(t.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
  std::vector<Edge> sub;
  for (const Edge& e : t.edges())
    if (local[e.u] >= 0 && local[e.v] >= 0) sub.push_back({local[e.u], local[e.v]});
  try {
    Tree::from_edges(static_cast<int>(nodes.size()), sub);
  } catch (const std::exception&) {
    problems.push_back("embedded nodes do not induce a subtree of T");
  }
  std::size_t adj_edges = 0;
  for (const auto& row : st.tree_adj) adj_edges += row.size();
  if (adj_edges != 2 * sub.size() || st.edge_colour.size() != sub.size())
    problems.push_back("tree adjacency disagrees with the embedded subtree");
  std::vector<int> seen(st.palette, 0);
  for (const Edge& e : sub) {
    const int a = st.f[nodes[e.u]], b = st.f[nodes[e.v]];
    auto it = st.edge_colour.find(pair_key(a, b));
    if (it == st.edge_colour.end()) {
      problems.push_back("image of a tree edge is missing");
      continue;
    }
    if (seen[it->second]++) problems.push_back("colour repeated in the embedded tree");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (st.f_inv[st.f[nodes[i]]] != nodes[i]) problems.push_back("f and its inverse disagree");
  return problems;
}

SpanningResult embed_spanning(const ColouredGraph& g, const Tree& t, const SpanningConfig& cfg, RandomSource& rng) {
  SpanningResult res;
  const int n = g.n();
  const int d = cfg.d;
  if (t.size() != n) throw ParameterError("embed_spanning: tree must have n nodes");
  if (t.max_degree() > d) throw ParameterError("embed_spanning: tree exceeds max degree d");
  if (!(cfg.alpha > 0.0)) throw ParameterError("embed_spanning: alpha must be positive");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ParameterError("embed_spanning: p must lie in [0,1]");

  auto stage = [&](const std::string& name, bool ok, const std::string& detail) {
    res.trace.push_back({name, ok, detail});
    if (!ok && res.failed_stage.empty()) res.failed_stage = name;
    return ok;
  };

  res.eps_paper = paper_spanning_eps(cfg.delta, d);
  res.eps = cfg.eps_override.value_or(res.eps_paper);
  if (!(res.eps > 0.0 && res.eps < 1.0)) throw ParameterError("embed_spanning: eps must lie in (0,1)");
  const int ell = n - static_cast<int>(std::floor(res.eps * n + 1e-9));
  res.leftover = n - ell;
  const int palette = static_cast<int>(std::floor((1.0 + cfg.alpha) * n + 1e-9));
  {
    std::ostringstream s;
    s << "eps=" << res.eps << " eps_paper=" << res.eps_paper << " leftover=" << res.leftover
      << " palette=" << palette;
    stage("parameters", true, s.str());
  }

  TrimResult trim = trim_to_size(t, ell, rng);
  ColouredGraph r_prime = uniform_colouring(gen_gnp(n, cfg.p, rng), palette, rng);
  FixedHost r_host(r_prime);
  ExposureLedger r_ledger(r_host);
  res.almost = embed_almost_spanning(r_ledger, trim.subtree, res.eps, d, rng, cfg.knobs);
  for (const auto& rec : res.almost.trace) res.trace.push_back({"almost:" + rec.stage, rec.ok, rec.detail});
  if (!stage("almost-spanning", res.almost.ok, "inner=" + (res.almost.ok ? std::string("ok") : res.almost.failed_stage)))
    return res;

  ShiftedColouredGraph shift = randomness_shift(r_prime, rng);
  const ColouredGraph& R = shift.shifted;
  res.r_max_degree = R.max_degree();
  res.r_degree_violation = res.r_max_degree > cfg.r_degree_c * std::log(std::max(n, 2));
  {
    std::ostringstream s;
    s << "r_edges=" << R.edge_count() << " r_max_degree=" << res.r_max_degree
      << " violation=" << (res.r_degree_violation ? 1 : 0);
    stage("shift", true, s.str());
  }

  AbsorptionState st;
  st.n = n;
  st.palette = palette;
  st.f.assign(n, -1);
  st.f_inv.assign(n, -1);
  st.tree_adj.assign(n, {});
  st.colour_count.assign(palette, 0);
  st.absorber.assign(n, 0);
  st.used_absorber.assign(n, 0);
  for (int a = 0; a < trim.subtree.size(); ++a) {
    const int v = shift.perm[res.almost.embedding[a]];
    st.f[trim.to_original[a]] = v;
    st.f_inv[v] = trim.to_original[a];
  }
  for (const Edge& e : trim.subtree.edges()) {
    const int a = st.f[trim.to_original[e.u]], b = st.f[trim.to_original[e.v]];
    auto c = R.colour_of(a, b);
    if (!c) throw ContractError("embed_spanning: shifted tree edge missing from R");
    st.add_edge(a, b, *c);
  }
  std::vector<int> unshift(n);
  for (int v = 0; v < n; ++v) unshift[shift.perm[v]] = v;
  auto finish = [&](const ExposureLedger* g_ledger) {
    res.embedding = st.f;
    res.random_part = R;
    for (const Edge& e : t.edges()) {
      const int a = st.f[e.u], b = st.f[e.v];
      auto c = R.colour_of(a, b);
      const bool seen = c ? r_ledger.is_exposed(unshift[a], unshift[b]) : g_ledger && g_ledger->is_exposed(a, b);
      if (!c && g_ledger) c = g_ledger->colour(a, b);
      res.edge_colours.push_back(c.value_or(-1));
      if (!seen) ++res.unexposed_edges;
    }
  };
  if (res.leftover == 0) {
    finish(nullptr);
    res.ok = true;
    stage("absorb", true, "leftover=0");
    return res;
  }

  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (!R.has_edge(e.u, e.v)) kept.push_back(e);
  ColouredGraph g_minus_r = ColouredGraph::from_edges(n, std::move(kept));

  std::vector<int> i0;
  try {
    i0 = build_I0(t, trim, d, res.eps);
  } catch (const StructuralError& e) {
    stage("absorbers", false, std::string("error=\"") + e.what() + "\"");
    return res;
  }
  for (int x : i0) st.absorber[st.f[x]] = 1;
  stage("absorbers", true, "count=" + std::to_string(i0.size()));

  EdgePartition parts = partition_edge_set(g_minus_r, d, cfg.delta, rng, cfg.partition_budget);
  {
    std::ostringstream s;
    s << "attempts=" << parts.attempts << " min_degree=" << (g_minus_r.n() ? g_minus_r.min_degree() : 0);
    if (!parts.ok) s << " failure=" << parts.failure;
    if (!stage("partition", parts.ok, s.str())) return res;
  }
  for (const Edge& e : g_minus_r.edges())
    if (R.has_edge(e.u, e.v)) throw ContractError("embed_spanning: partition shares an edge with R");

  FixedHost g_host(g_minus_r, palette, rng.split(0xab5));
  ExposureLedger g_ledger(g_host);
  std::vector<int> leftover_vertices;
  for (int v = 0; v < n; ++v)
    if (st.f_inv[v] < 0) leftover_vertices.push_back(v);
  std::vector<int> leftover_nodes(trim.removed.rbegin(), trim.removed.rend());

  for (int i = 0; i < res.leftover; ++i) {
    const int v_node = leftover_nodes[i];
    int u_node = -1;
    for (int y : t.neighbours(v_node))
      if (st.f[y] >= 0) {
        if (u_node >= 0) throw ContractError("embed_spanning: leftover node has two embedded neighbours");
        u_node = y;
      }
    if (u_node < 0) throw ContractError("embed_spanning: leftover node has no embedded neighbour");
    AbsorbOutcome out;
    try {
      out = absorb_step(st, parts, g_ledger, leftover_vertices[i], u_node, v_node);
    } catch (const StructuralError& e) {
      res.absorb_lines.push_back("i=" + std::to_string(i + 1) + " j*=none |B|=0 chosen=fail");
      stage("absorb", false, std::string("error=\"") + e.what() + "\"");
      return res;
    }
    res.absorb_lines.push_back(format_absorb_line(i + 1, out));
    if (!out.ok) {
      stage("absorb", false, "i=" + std::to_string(i + 1) + " candidates=" + std::to_string(out.b_avail));
      return res;
    }
    ++res.absorbed;
    auto problems = check_absorption_state(st, t);
    if (!problems.empty()) throw ContractError("absorb_step broke the state: " + problems.front());
  }
  stage("absorb", true, "absorbed=" + std::to_string(res.absorbed));

  finish(&g_ledger);
  res.validity_problems = check_embedding(t, st.f, n, [&](int a, int b) -> std::optional<int> {
    if (auto c = R.colour_of(a, b)) return c;
    return g_ledger.colour(a, b);
  }, true);
  res.ok = res.validity_problems.empty();
  stage("validity", res.ok, "problems=" + std::to_string(res.validity_problems.size()));
  return res;
}

BStatistics measure_B_statistics(const EdgePartition& parts, const std::vector<char>& absorbers,
                                 const TreeAdjacency& tree_adj, double delta, int d, int samples,
                                 RandomSource& rng) {
  BStatistics out;
  const int n = parts.host.n();
  out.bound = large_buv_bound(delta, d, n);
  if (n < 2 || samples <= 0) return out;
  double sum = 0.0;
  out.min_size = n;
  for (int s = 0; s < samples; ++s) {
    int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(parts.parts)));
    int u = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
    if (v >= u) ++v;
    int b = static_cast<int>(compute_B(parts, absorbers, tree_adj, u, v, j).size());
    out.min_size = std::min(out.min_size, b);
    sum += b;
    if (b < out.bound) ++out.below_bound;
  }
  out.samples = samples;
  out.mean_size = sum / samples;
  return out;
}

}  // namespace rainbow
