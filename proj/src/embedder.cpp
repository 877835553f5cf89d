#include "rainbow/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace rainbow {

namespace {

class Detail {
 public:
  template <class T>
  Detail& operator()(const char* key, const T& value) {
    if (!first_) out_ << ' ';
    first_ = false;
    out_ << key << '=' << value;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

// Like degrade_attach but without the degree requirement; used when fewer
// reservoir edges than the lemma wants were found.
ColouredGraph attach_vertex(const ColouredGraph& h, std::span<const int> attach,
                            std::span<const int> colours) {
  std::vector<Edge> edges = h.edges();
  std::vector<int> cols = h.colours();
  for (std::size_t i = 0; i < attach.size(); ++i) {
    edges.push_back({attach[i], h.n()});
    cols.push_back(colours[i]);
  }
  return ColouredGraph::from_coloured_edges(h.n() + 1, std::move(edges), std::move(cols), h.palette());
}

}  // namespace

int PipelineParams::block_size(int tree_nodes) const {
  return static_cast<int>(std::ceil(block_factor() * tree_nodes - 1e-9));
}

PipelineParams derive_parameters(double eps, int d, int n, const PipelineKnobs& knobs) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("derive_parameters: eps must lie in (0,1)");
  if (d < 2) throw ParameterError("derive_parameters: d must be at least 2");
  if (n < 1) throw ParameterError("derive_parameters: n must be positive");
  if (!(knobs.c_beta > 0.0) || !(knobs.c_rho > 0.0))
    throw ParameterError("derive_parameters: constants must be positive");
  PipelineParams p;
  p.eps = eps;
  p.d = d;
  p.n = n;
  p.zeta = std::min(eps / (2.0 * (1.0 - eps)), 0.5);
  p.beta = knobs.c_beta * p.zeta * eps / (std::pow(d, 4) * std::log(1.0 / p.zeta));
  p.rho = knobs.c_rho * eps;
  p.xi = (1.0 - 1.5 * p.zeta) * p.beta;
  p.reservoir_size = static_cast<int>(std::floor(p.rho * n + 1e-9));
  const double ratio = d / p.xi;
  p.s_bound = static_cast<int>(std::min(std::ceil(ratio) + 1.0, 2e9));
  if (p.xi * n / d < 1.0) {
    auto min_n = static_cast<long long>(std::ceil(ratio));
    throw InfeasibleParameters("parameters infeasible: xi*n/d < 1; need n >= " + std::to_string(min_n), min_n);
  }
  return p;
}

RootedEmbedding embed_rooted_tree(const ColouredGraph& h, const Tree& t, int root_node,
                                  std::optional<int> root_vertex, RandomSource& rng,
                                  int rollback_budget, int root_attempts) {
  const int m = t.size();
  const int n = h.n();
  if (m < 1) throw ParameterError("embed_rooted_tree: empty tree");
  if (m > n) throw ParameterError("embed_rooted_tree: tree larger than host");
  if (root_node < 0 || root_node >= m) throw DomainError("embed_rooted_tree: root node out of range");
  if (root_vertex && (*root_vertex < 0 || *root_vertex >= n))
    throw DomainError("embed_rooted_tree: root vertex out of range");

  std::vector<int> order;
  std::vector<int> parent = t.parents(root_node, &order);
  std::vector<int> kids(m, 0);
  for (int i = 1; i < m; ++i) ++kids[parent[order[i]]];
  const int budget = rollback_budget < 0 ? m : rollback_budget;

  std::vector<int> roots;
  if (root_vertex) {
    roots.push_back(*root_vertex);
  } else {
    roots.resize(n);
    for (int v = 0; v < n; ++v) roots[v] = v;
    std::stable_sort(roots.begin(), roots.end(),
                     [&](int a, int b) { return h.degree(a) > h.degree(b); });
    roots.resize(std::min<std::size_t>(roots.size(), std::max(1, root_attempts)));
  }

  RootedEmbedding out;
  std::vector<int> f(m);
  std::vector<char> used(n);
  std::vector<int> free_deg(n);
  std::vector<int> demand(n);  // unplaced children of the node embedded at v
  std::vector<std::vector<int>> cand(m);
  std::vector<std::size_t> next(m);
  std::vector<char> built(m);

  auto place = [&](int x, int w) {
    f[x] = w;
    used[w] = 1;
    demand[w] = kids[x];
    if (parent[x] >= 0) --demand[f[parent[x]]];
    for (int z : h.neighbours(w)) --free_deg[z];
  };
  auto unplace = [&](int x) {
    int w = f[x];
    for (int z : h.neighbours(w)) ++free_deg[z];
    if (parent[x] >= 0) ++demand[f[parent[x]]];
    demand[w] = 0;
    used[w] = 0;
    f[x] = -1;
  };
  // Taking w must leave every other embedded vertex enough free neighbours
  // for its unplaced children.
  auto feasible = [&](int x, int w) {
    if (used[w] || free_deg[w] < kids[x]) return false;
    const int pw = f[parent[x]];
    for (int z : h.neighbours(w))
      if (z != pw && used[z] && demand[z] > 0 && free_deg[z] - 1 < demand[z]) return false;
    return true;
  };

  // Greedy placement of seq (parents before children) with back-jumping.
  // Returns false once the rollback budget is spent.
  std::vector<int> seq_pos(m, -1);
  auto greedy = [&](const std::vector<int>& seq, int& rollbacks) {
    for (std::size_t i = 0; i < seq.size(); ++i) seq_pos[seq[i]] = static_cast<int>(i);
    std::fill(built.begin(), built.end(), 0);
    int pos = 1;
    const int len = static_cast<int>(seq.size());
    while (pos < len) {
      const int x = seq[pos];
      if (!built[pos]) {
        auto& c = cand[pos];
        c.clear();
        for (int z : h.neighbours(f[parent[x]]))
          if (feasible(x, z)) c.push_back(z);
        rng.shuffle(std::span<int>(c));
        // Hubs go to nodes with children; leaves take the poorest vertices.
        if (kids[x] > 0)
          std::stable_sort(c.begin(), c.end(), [&](int a, int b) { return free_deg[a] > free_deg[b]; });
        else
          std::stable_sort(c.begin(), c.end(), [&](int a, int b) { return free_deg[a] < free_deg[b]; });
        built[pos] = 1;
        next[pos] = 0;
      } else if (f[x] >= 0) {
        unplace(x);
      }
      int w = -1;
      while (next[pos] < cand[pos].size()) {
        int z = cand[pos][next[pos]++];
        if (feasible(x, z)) {
          w = z;
          break;
        }
      }
      if (w >= 0) {
        place(x, w);
        ++pos;
        continue;
      }
      // Back-jump to the parent's position, undoing everything placed since.
      built[pos] = 0;
      const int target = seq_pos[parent[x]];
      for (int q = pos - 1; q > target; --q) {
        unplace(seq[q]);
        built[q] = 0;
        ++rollbacks;
      }
      pos = target;
      if (pos == 0 || ++rollbacks > budget) return false;
    }
    return true;
  };

  // Leaves of the skeleton's image matched to free neighbours of their
  // parents' images (augmenting paths).
  std::vector<int> leaves;
  for (int x : order)
    if (x != root_node && kids[x] == 0) leaves.push_back(x);
  std::vector<int> skeleton;
  for (int x : order)
    if (x == root_node || kids[x] > 0) skeleton.push_back(x);
  std::vector<int> owner(n, -1);
  std::vector<int> stamp(n, 0);
  int epoch = 0;
  std::vector<std::vector<int>> opts(m);
  auto match_leaves = [&]() {
    std::fill(owner.begin(), owner.end(), -1);
    for (int l : leaves) {
      auto& o = opts[l];
      o.clear();
      for (int z : h.neighbours(f[parent[l]]))
        if (!used[z]) o.push_back(z);
      rng.shuffle(std::span<int>(o));
    }
    std::vector<int> match(m, -1);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int l0 : leaves) {
      ++epoch;
      stack.assign(1, {l0, 0});
      bool found = false;
      while (!stack.empty() && !found) {
        auto& [l, i] = stack.back();
        if (i == opts[l].size()) {
          stack.pop_back();
          continue;
        }
        const int z = opts[l][i++];
        if (stamp[z] == epoch) continue;
        stamp[z] = epoch;
        if (owner[z] < 0) {
          // flip the path recorded on the stack
          int give = z;
          for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const int leaf = it->first;
            const int prev = match[leaf];
            match[leaf] = give;
            owner[give] = leaf;
            give = prev;
          }
          found = true;
        } else {
          stack.push_back({owner[z], 0});
        }
      }
      if (!found) return false;
    }
    for (int l : leaves) place(l, match[l]);
    return true;
  };

  auto reset = [&](int r) {
    std::fill(f.begin(), f.end(), -1);
    std::fill(used.begin(), used.end(), 0);
    std::fill(demand.begin(), demand.end(), 0);
    for (int v = 0; v < n; ++v) free_deg[v] = h.degree(v);
    place(root_node, r);
  };

  for (int r : roots) {
    if (h.degree(r) < kids[root_node]) continue;
    int rollbacks = 0;
    reset(r);
    bool ok = greedy(skeleton, rollbacks) && match_leaves();
    if (!ok) {
      // Fall back to placing leaves greedily along with everything else.
      reset(r);
      int more = 0;
      ok = greedy(order, more);
      rollbacks += more;
    }
    out.rollbacks += rollbacks;
    if (ok) {
      out.ok = true;
      out.map = f;
      return out;
    }
  }
  return out;
}

RootEdgeSelection select_root_edges(ExposureLedger& ledger, int r, std::span<const int> candidates,
                                    const ColourMask& fresh, int needed) {
  RootEdgeSelection sel;
  if (needed <= 0) {
    sel.ok = true;
    return sel;
  }
  std::vector<char> taken(ledger.palette(), 0);
  for (int v : candidates) {
    auto c = ledger.expose(r, v);
    ++sel.exposed;
    if (!c) continue;
    ++sel.present;
    if (static_cast<int>(sel.targets.size()) >= needed) continue;
    if (*c >= static_cast<int>(fresh.size()) || !fresh[*c] || taken[*c]) continue;
    taken[*c] = 1;
    sel.targets.push_back(v);
    sel.colours.push_back(*c);
  }
  sel.ok = static_cast<int>(sel.targets.size()) >= needed;
  return sel;
}

int colour_coverage(std::span<const int> colours, const ColourMask& allowed) {
  std::vector<char> seen(allowed.size(), 0);
  int count = 0;
  for (int c : colours) {
    if (c < 0 || c >= static_cast<int>(allowed.size()) || !allowed[c] || seen[c]) continue;
    seen[c] = 1;
    ++count;
  }
  return count;
}

std::string format_trace_line(const StageRecord& rec) {
  return "stage=" + rec.stage + " status=" + (rec.ok ? "ok" : "fail") + " detail=" + rec.detail;
}

std::vector<std::string> check_embedding(const Tree& t, std::span<const int> f, int n,
                                         const ColourLookup& colour, bool spanning) {
  std::vector<std::string> problems;
  const int m = t.size();
  if (static_cast<int>(f.size()) != m) {
    problems.push_back("map covers " + std::to_string(f.size()) + " of " + std::to_string(m) + " nodes");
    return problems;
  }
  std::vector<int> inverse(n, -1);
  for (int x = 0; x < m; ++x) {
    if (f[x] < 0 || f[x] >= n) {
      problems.push_back("node " + std::to_string(x) + " unmapped");
      continue;
    }
    if (inverse[f[x]] >= 0)
      problems.push_back("vertex " + std::to_string(f[x]) + " used twice");
    inverse[f[x]] = x;
  }
  if (!problems.empty()) return problems;
  if (spanning && m != n) problems.push_back("image is not spanning");

  std::unordered_map<int, Edge> colour_owner;
  std::vector<Edge> image;
  for (const Edge& e : t.edges()) {
    int a = f[e.u], b = f[e.v];
    image.push_back(make_edge(a, b));
    auto c = colour(a, b);
    if (!c) {
      problems.push_back("edge " + std::to_string(a) + "-" + std::to_string(b) + " missing from host");
      continue;
    }
    auto [it, fresh] = colour_owner.emplace(*c, make_edge(a, b));
    if (!fresh) problems.push_back("colour " + std::to_string(*c) + " repeated");
  }
  // Re-derive the image as a tree on its own vertex set and map it back.
  std::vector<int> verts(f.begin(), f.end());
  std::sort(verts.begin(), verts.end());
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<Edge> relabelled;
  for (const Edge& e : image) relabelled.push_back(make_edge(local(e.u), local(e.v)));
  try {
    Tree img = Tree::from_edges(m, relabelled);
    for (const Edge& e : img.edges())
      if (!t.has_edge(inverse[verts[e.u]], inverse[verts[e.v]]))
        problems.push_back("image edge without a tree preimage");
  } catch (const std::exception& ex) {
    problems.push_back(std::string("image is not a tree: ") + ex.what());
  }
  return problems;
}

AlmostSpanningResult embed_almost_spanning(ExposureLedger& ledger, const Tree& t, double eps, int d,
                                           RandomSource& rng, const PipelineKnobs& knobs) {
  AlmostSpanningResult res;
  const int n = ledger.n();
  const int k = ledger.palette();
  const int m = t.size();
  if (m < 1) throw ParameterError("embed_almost_spanning: empty tree");
  if (t.max_degree() > d) throw ParameterError("embed_almost_spanning: tree exceeds max degree d");
  if (m > n - static_cast<int>(std::floor(eps * n + 1e-9)))
    throw ParameterError("embed_almost_spanning: tree has more than (1-eps)n nodes");

  auto stage = [&](const std::string& name, bool ok, const std::string& detail) {
    res.trace.push_back({name, ok, detail});
    if (!ok && res.failed_stage.empty()) res.failed_stage = name;
    return ok;
  };

  if (m == 1) {
    res.embedding = {0};
    res.ok = true;
    stage("trivial", true, "nodes=1");
    return res;
  }

  try {
    res.params = derive_parameters(eps, d, n, knobs);
  } catch (const InfeasibleParameters& e) {
    stage("parameters", false, Detail()("min_n", e.min_n()).str());
    return res;
  }
  const PipelineParams& P = res.params;
  stage("parameters", true,
        Detail()("zeta", P.zeta)("beta", P.beta)("rho", P.rho)("xi", P.xi)("reservoir", P.reservoir_size).str());

  TreeDecomposition dec;
  try {
    dec = decompose_tree(t, d, eps, P.xi, n);
  } catch (const ParameterError& e) {
    stage("decomposition", false, Detail()("error", '"' + std::string(e.what()) + '"').str());
    return res;
  }
  RootSets roots = compute_root_sets(t, dec);
  const int s = dec.count();
  res.pieces = s;
  res.reservoir_bound = s * (d + 2) * (d + 2);

  std::vector<std::vector<int>> blocks(s);
  long long total = 0;
  for (int i = 0; i < s; ++i) total += P.block_size(roots.augmented[i].tree.size());
  if (!stage("decomposition", total <= n, Detail()("pieces", s)("blocks_total", total)("n", n).str()))
    return res;
  for (int i = 0, next = 0; i < s; ++i) {
    int b = P.block_size(roots.augmented[i].tree.size());
    for (int j = 0; j < b; ++j) blocks[i].push_back(next++);
  }

  if (P.reservoir_size > k) throw ParameterError("embed_almost_spanning: reservoir exceeds palette");
  ColourMask reservoir(k, 0);
  for (int c = k - P.reservoir_size; c < k; ++c) reservoir[c] = 1;
  std::vector<char> used(k, 0);
  std::vector<int> f(m, -1);
  const int needed = (d + 2) * (d + 2);

  for (int i = 0; i < s; ++i) {
    const AugmentedPiece& piece = roots.augmented[i];
    const std::vector<int>& X = blocks[i];
    const std::string tag = std::to_string(i + 1);
    if (ledger.touches_any(X)) throw ContractError("exposure discipline: block " + tag + " touched early");

    ColourMask allowed(k, 0);
    int allowed_size = 0;
    for (int c = 0; c < k; ++c)
      if (!used[c] && !reservoir[c]) {
        allowed[c] = 1;
        ++allowed_size;
      }
    const double edge_budget = knobs.target_degree > 0.0 ? std::ceil(knobs.target_degree * X.size() / 2.0)
                          : i == 0                   ? knobs.first_budget * n
                                                     : knobs.later_budget * eps * n;
    int mi = std::max(1, static_cast<int>(std::floor(edge_budget + 1e-9)));
    if (knobs.target_degree > 0.0) mi = std::min(mi, allowed_size);
    if (allowed_size < eps * n / 2.0 || mi > allowed_size) {
      stage("parameters", false, Detail()("i", tag)("available", allowed_size)("m", mi).str());
      return res;
    }

    auto exposed = ledger.expose_block(X);
    SparsifyResult sp = sparsify_exposed(static_cast<int>(X.size()), exposed, k, allowed, mi, rng);
    if (!stage("sparsify", sp.ok(),
               Detail()("i", tag)("block", X.size())("exposed", sp.exposed_edges)("surviving", sp.surviving)("m", mi).str()))
      return res;

    ExpandParams ep;
    ep.theta = P.zeta / 2.0;
    ep.C = mi / (2.0 * X.size());
    ep.eta = i == 0 ? 1.0 / (2 * d + 2) : 1.0 / (2 * d + 1);
    ep.r = i == 0 ? d + 1 : d + 2;
    for (const auto& msg : ep.lemma_violations()) res.lemma_violations.push_back("i=" + tag + ": " + msg);
    CheckOptions co = knobs.expansion_check;
    co.seed = rng.next_u64();
    EffectiveExpander ee = find_effective_expander(sp.graph, ep, co);
    const bool expander_ok = ee.ok || (!knobs.enforce_expansion && ee.failed_item == "item3");
    if (!stage("expander", expander_ok,
               Detail()("i", tag)("kept", ee.vertices.size())("removed", ee.removed_vertices)("item",
                        ee.failed_item.empty() ? std::string("ok") : ee.failed_item).str()))
      return res;

    const Tree& ti = piece.tree;
    const int budget = std::max(0, knobs.rollback_factor) * ti.size();
    RootedEmbedding emb;
    int r = -1;
    int attached = -1;
    if (i == 0) {
      if (ti.size() > ee.graph.n()) {
        stage("embed", false, Detail()("i", tag)("nodes", ti.size())("host", ee.graph.n()).str());
        return res;
      }
      emb = embed_rooted_tree(ee.graph, ti, 0, std::nullopt, rng, budget, knobs.root_attempts);
    } else {
      const int root_local = *piece.root;
      r = f[piece.nodes[root_local]];
      if (r < 0) throw ContractError("root of piece " + tag + " not embedded");
      std::vector<int> cand;
      std::unordered_map<int, int> local_of;
      for (std::size_t j = 0; j < ee.vertices.size(); ++j) {
        cand.push_back(X[ee.vertices[j]]);
        local_of.emplace(cand.back(), static_cast<int>(j));
      }
      ColourMask fresh(k, 0);
      for (int c = 0; c < k; ++c) fresh[c] = reservoir[c] && !used[c];
      RootEdgeSelection sel = select_root_edges(ledger, r, cand, fresh, needed);
      if (!stage("root-edges", !sel.targets.empty(),
                 Detail()("i", tag)("exposed", sel.exposed)("present", sel.present)("chosen", sel.targets.size())(
                          "needed", needed).str()))
        return res;
      if (!sel.ok) ++res.short_root_stages;
      std::vector<int> attach;
      for (int v : sel.targets) attach.push_back(local_of.at(v));
      ColouredGraph h2 = sel.ok ? degrade_attach(ee.graph, attach, d, sel.colours)
                                : attach_vertex(ee.graph, attach, sel.colours);
      attached = ee.graph.n();
      if (ti.size() > h2.n()) {
        stage("embed", false, Detail()("i", tag)("nodes", ti.size())("host", h2.n()).str());
        return res;
      }
      emb = embed_rooted_tree(h2, ti, root_local, attached, rng, budget, 1);
    }
    if (!stage("embed", emb.ok, Detail()("i", tag)("nodes", ti.size())("rollbacks", emb.rollbacks).str()))
      return res;

    for (int x = 0; x < ti.size(); ++x) {
      const int node = piece.nodes[x];
      const int local = emb.map[x];
      const int v = local == attached ? r : X[ee.vertices[local]];
      if (i > 0 && x == *piece.root) continue;
      if (f[node] != -1) throw ContractError("tree node embedded twice");
      f[node] = v;
    }
    for (const Edge& e : ti.edges()) {
      const int a = f[piece.nodes[e.u]], b = f[piece.nodes[e.v]];
      auto c = ledger.colour(a, b);
      if (!c) throw ContractError("embedded edge was never exposed");
      if (used[*c]) throw ContractError("colour reused across stages");
      used[*c] = 1;
      if (reservoir[*c]) ++res.reservoir_used;
    }
  }

  res.embedding = f;
  res.validity_problems = check_embedding(t, f, n, [&](int a, int b) { return ledger.colour(a, b); });
  if (res.reservoir_used > res.reservoir_bound) res.validity_problems.push_back("reservoir leak above bound");
  res.ok = res.validity_problems.empty();
  stage("validity", res.ok,
        Detail()("problems", res.validity_problems.size())("reservoir_used", res.reservoir_used)(
                 "reservoir_bound", res.reservoir_bound).str());
  return res;
}

AlmostSpanningResult embed_almost_spanning(int n, double p, int palette, const Tree& t, double eps, int d,
                                           RandomSource& rng, const PipelineKnobs& knobs) {
  BinomialHost host(n, p, palette, rng.split(0x6057));
  ExposureLedger ledger(host);
  return embed_almost_spanning(ledger, t, eps, d, rng, knobs);
}

}  // namespace rainbow
