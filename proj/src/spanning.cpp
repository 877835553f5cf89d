#include "rainbow/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "rainbow/errors.hpp"

namespace rainbow {

namespace {

// Unit vertex capacities via the in/out split: in(v) = 2v, out(v) = 2v + 1.
class SplitFlow {
 public:
  explicit SplitFlow(const ColouredGraph& g) : n_(g.n()) {
    head_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) add_arc(2 * v, 2 * v + 1, 1);
    for (const Edge& e : g.edges()) {
      add_arc(2 * e.u + 1, 2 * e.v, kInf);
      add_arc(2 * e.v + 1, 2 * e.u, kInf);
    }
    base_cap_ = cap_;
  }

  // Max number of internally disjoint s-t paths, stopping once `limit` is hit.
  int run(int s, int t, int limit) {
    cap_ = base_cap_;
    const int src = 2 * s + 1, snk = 2 * t;
    int flow = 0;
    std::vector<int> via(2 * n_);
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> q{src};
      via[src] = -2;
      while (!q.empty() && via[snk] == -1) {
        int a = q.front();
        q.pop_front();
        for (int e = head_[a]; e >= 0; e = next_[e])
          if (cap_[e] > 0 && via[to_[e]] == -1) {
            via[to_[e]] = e;
            q.push_back(to_[e]);
          }
      }
      if (via[snk] == -1) break;
      for (int a = snk; a != src; a = to_[via[a] ^ 1]) {
        --cap_[via[a]];
        ++cap_[via[a] ^ 1];
      }
      ++flow;
    }
    return flow;
  }

  // Vertices whose split arc crosses the residual cut after run().
  std::vector<int> cut(int s) const {
    std::vector<char> seen(2 * n_, 0);
    std::deque<int> q{2 * s + 1};
    seen[2 * s + 1] = 1;
    while (!q.empty()) {
      int a = q.front();
      q.pop_front();
      for (int e = head_[a]; e >= 0; e = next_[e])
        if (cap_[e] > 0 && !seen[to_[e]]) {
          seen[to_[e]] = 1;
          q.push_back(to_[e]);
        }
    }
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
      if (seen[2 * v] && !seen[2 * v + 1]) out.push_back(v);
    return out;
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  void add_arc(int a, int b, int c) {
    to_.push_back(b);
    cap_.push_back(c);
    next_.push_back(head_[a]);
    head_[a] = static_cast<int>(to_.size()) - 1;
    to_.push_back(a);
    cap_.push_back(0);
    next_.push_back(head_[b]);
    head_[b] = static_cast<int>(to_.size()) - 1;
  }

  int n_;
  std::vector<int> head_, to_, next_, cap_, base_cap_;
};

std::vector<std::vector<int>> components(const ColouredGraph& g, const std::vector<char>& removed) {
  std::vector<int> comp(g.n(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n(); ++s) {
    if (removed[s] || comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (int w : g.neighbours(v))
        if (!removed[w] && comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

struct CutSearch {
  int value = 0;
  std::vector<int> cut;
};

// Even's scheme: some minimum separator misses one of v_0..v_kappa, so only
// those need to serve as sources.
CutSearch search_min_cut(const ColouredGraph& g, bool want_cut) {
  const int n = g.n();
  CutSearch best;
  best.value = std::max(0, n - 1);
  if (n <= 1) {
    best.value = 0;
    return best;
  }
  std::vector<char> none(n, 0);
  if (components(g, none).size() > 1) {
    best.value = 0;
    return best;
  }
  SplitFlow flow(g);
  for (int s = 0; s < n && s <= best.value; ++s)
    for (int t = s + 1; t < n; ++t) {
      if (g.has_edge(s, t)) continue;
      int k = flow.run(s, t, best.value);
      if (k < best.value) {
        best.value = k;
        if (want_cut) best.cut = flow.cut(s);
      }
    }
  return best;
}

}  // namespace

bool VertexPartition::is_valid(int n) const {
  std::vector<char> seen(n, 0);
  int covered = 0;
  for (const auto& b : blocks) {
    if (b.empty()) return false;
    for (int v : b) {
      if (v < 0 || v >= n || seen[v]) return false;
      seen[v] = 1;
      ++covered;
    }
  }
  return covered == n;
}

int vertex_connectivity(const ColouredGraph& g) { return search_min_cut(g, false).value; }

std::vector<int> min_vertex_cut(const ColouredGraph& g) { return search_min_cut(g, true).cut; }

PartitionAudit audit_partition(const ColouredGraph& h, const VertexPartition& part, int k) {
  PartitionAudit audit;
  const int n = h.n();
  audit.threshold = n > 0 ? static_cast<int>(std::ceil(static_cast<double>(k) * k / (16.0 * n) - 1e-12)) : 0;
  if (!part.is_valid(n)) audit.problems.push_back("not a partition of the vertex set");
  for (std::size_t i = 0; i < part.blocks.size(); ++i) {
    const auto& b = part.blocks[i];
    int kappa = vertex_connectivity(h.induced(b));
    audit.connectivity.push_back(kappa);
    if (kappa < audit.threshold)
      audit.problems.push_back("block " + std::to_string(i) + " is only " + std::to_string(kappa) + "-connected");
    if (b.size() < k / 8.0)
      audit.problems.push_back("block " + std::to_string(i) + " has fewer than k/8 vertices");
  }
  return audit;
}

VertexPartition highly_connected_partition(const ColouredGraph& h, int k) {
  const int n = h.n();
  if (k <= 0) throw ParameterError("highly_connected_partition: k must be positive");
  if (n == 0 || h.min_degree() < k) throw ParameterError("highly_connected_partition: min degree below k");
  const int threshold = static_cast<int>(std::ceil(static_cast<double>(k) * k / (16.0 * n) - 1e-12));
  VertexPartition out;
  std::vector<std::vector<int>> work;
  work.emplace_back(n);
  std::iota(work.back().begin(), work.back().end(), 0);
  while (!work.empty()) {
    std::vector<int> block = std::move(work.back());
    work.pop_back();
    ColouredGraph sub = h.induced(block);
    CutSearch cs = search_min_cut(sub, true);
    if (cs.value >= threshold || block.size() <= 1) {
      out.blocks.push_back(block);
      continue;
    }
    std::vector<char> removed(sub.n(), 0);
    for (int v : cs.cut) removed[v] = 1;
    auto comps = components(sub, removed);
    if (comps.size() < 2) throw ContractError("highly_connected_partition: cut does not separate");
    auto smallest = std::min_element(comps.begin(), comps.end(),
                                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<char> first(sub.n(), 0);
    for (int v : *smallest) first[v] = 1;
    for (int v : cs.cut) first[v] = 1;
    std::vector<int> side, rest;
    for (int v = 0; v < sub.n(); ++v) (first[v] ? side : rest).push_back(block[v]);
    work.push_back(std::move(rest));
    work.push_back(std::move(side));
  }
  std::sort(out.blocks.begin(), out.blocks.end());
  PartitionAudit audit = audit_partition(h, out, k);
  if (!audit.ok()) throw ContractError("highly_connected_partition: " + audit.problems.front());
  return out;
}

CriterionResult suzuki_check(const ColouredGraph& g) {
  const int n = g.n();
  if (n > kSuzukiExactLimit) throw CapacityError("suzuki_check: exact enumeration limited to 12 vertices");
  if (!g.is_coloured() && g.edge_count() > 0) throw ParameterError("suzuki_check: graph must be coloured");
  CriterionResult res;
  if (n <= 1) return res;
  std::vector<int> a(n, 0), maxpref(n, 0);
  std::vector<int> stamp(std::max(g.palette(), 1), -1);
  int tick = 0;
  // Restricted-growth strings in lexicographic order.
  while (true) {
    const int s = *std::max_element(a.begin(), a.end()) + 1;
    if (s >= 2) {
      ++tick;
      int distinct = 0;
      for (std::size_t id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edges()[id];
        if (a[e.u] == a[e.v]) continue;
        int c = g.colour(static_cast<int>(id));
        if (stamp[c] != tick) {
          stamp[c] = tick;
          ++distinct;
        }
      }
      if (distinct < s - 1) {
        res.holds = false;
        res.witness.blocks.assign(s, {});
        for (int v = 0; v < n; ++v) res.witness.blocks[a[v]].push_back(v);
        return res;
      }
    }
    int i = n - 1;
    while (i >= 1 && a[i] > maxpref[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    maxpref[i] = std::max(maxpref[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      maxpref[j] = maxpref[i];
    }
  }
  return res;
}

std::optional<std::vector<int>> find_rainbow_spanning_tree(const ColouredGraph& g) {
  const int n = g.n();
  if (n <= 1) return std::vector<int>{};
  if (!g.is_coloured()) throw ParameterError("find_rainbow_spanning_tree: graph must be coloured");
  std::vector<char> none(n, 0);
  if (components(g, none).size() > 1) return std::nullopt;

  const int m = static_cast<int>(g.edge_count());
  std::vector<char> in(m, 0);
  std::vector<int> colour_user(g.palette(), -1);

  // Forest helpers over the current independent set.
  std::vector<std::vector<std::pair<int, int>>> fadj(n);  // (neighbour, edge id)
  auto rebuild = [&] {
    for (auto& row : fadj) row.clear();
    for (int id = 0; id < m; ++id)
      if (in[id]) {
        fadj[g.edges()[id].u].push_back({g.edges()[id].v, id});
        fadj[g.edges()[id].v].push_back({g.edges()[id].u, id});
      }
  };
  std::vector<int> comp(n);
  auto label = [&] {
    std::fill(comp.begin(), comp.end(), -1);
    for (int s = 0, c = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> stack{s};
      comp[s] = c;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, id] : fadj[v])
          if (comp[w] < 0) {
            comp[w] = c;
            stack.push_back(w);
          }
      }
      ++c;
    }
  };
  auto forest_path = [&](int a, int b) {
    std::vector<int> via(n, -2);
    std::vector<int> stack{a};
    via[a] = -1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, id] : fadj[v])
        if (via[w] == -2) {
          via[w] = id;
          stack.push_back(w);
        }
    }
    std::vector<int> ids;
    for (int v = b; v != a;) {
      int id = via[v];
      ids.push_back(id);
      const Edge& e = g.edges()[id];
      v = e.u == v ? e.v : e.u;
    }
    return ids;
  };

  // Greedy rainbow forest, then augment.
  {
    rebuild();
    label();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int id = 0; id < m; ++id) {
      const Edge& e = g.edges()[id];
      int c = g.colour(id);
      if (colour_user[c] >= 0 || find(e.u) == find(e.v)) continue;
      parent[find(e.u)] = find(e.v);
      in[id] = 1;
      colour_user[c] = id;
    }
  }
  int size = static_cast<int>(std::count(in.begin(), in.end(), 1));
  while (size < n - 1) {
    rebuild();
    label();
    // Arcs y -> z (y in I) when I - y + z is a forest; z -> y when colours match.
    std::vector<std::vector<int>> out_arcs(m);
    std::vector<char> source(m, 0), sink(m, 0);
    for (int z = 0; z < m; ++z) {
      if (in[z]) continue;
      const Edge& e = g.edges()[z];
      if (comp[e.u] != comp[e.v])
        source[z] = 1;
      else
        for (int y : forest_path(e.u, e.v)) out_arcs[y].push_back(z);
      int c = g.colour(z);
      if (colour_user[c] < 0)
        sink[z] = 1;
      else
        out_arcs[z].push_back(colour_user[c]);
    }
    std::vector<int> via(m, -2);
    std::deque<int> q;
    for (int z = 0; z < m; ++z)
      if (source[z]) {
        via[z] = -1;
        q.push_back(z);
      }
    int end = -1;
    while (!q.empty() && end < 0) {
      int a = q.front();
      q.pop_front();
      if (sink[a]) {
        end = a;
        break;
      }
      for (int b : out_arcs[a])
        if (via[b] == -2) {
          via[b] = a;
          q.push_back(b);
        }
    }
    if (end < 0) return std::nullopt;
    for (int a = end; a >= 0; a = via[a]) in[a] = !in[a];
    std::fill(colour_user.begin(), colour_user.end(), -1);
    for (int id = 0; id < m; ++id)
      if (in[id]) colour_user[g.colour(id)] = id;
    ++size;
  }
  std::vector<int> tree;
  for (int id = 0; id < m; ++id)
    if (in[id]) tree.push_back(id);
  return tree;
}

bool check_crossing_edges(const ColouredGraph& g, const VertexPartition& part, int t) {
  const int b = part.size();
  if (b <= 1) return true;
  std::vector<int> block_of(g.n(), -1);
  for (int i = 0; i < b; ++i)
    for (int v : part.blocks[i]) block_of[v] = i;
  std::vector<long long> count(static_cast<std::size_t>(b) * b, 0);
  for (const Edge& e : g.edges()) {
    int x = block_of[e.u], y = block_of[e.v];
    if (x < 0 || y < 0 || x == y) continue;
    ++count[static_cast<std::size_t>(std::min(x, y)) * b + std::max(x, y)];
  }
  for (int i = 0; i < b; ++i)
    for (int j = i + 1; j < b; ++j)
      if (count[static_cast<std::size_t>(i) * b + j] < 2LL * t) return false;
  return true;
}

}  // namespace rainbow
