#include "rainbow/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "rainbow/errors.hpp"

namespace rainbow {

Tree Tree::from_edges(int m, std::vector<Edge> edges) {
  if (m < 1) throw ParameterError("tree must have at least one node");
  if (static_cast<int>(edges.size()) != m - 1)
    throw ParameterError("tree on " + std::to_string(m) + " nodes needs " +
                         std::to_string(m - 1) + " edges");
  Tree t;
  t.m_ = m;
  t.adj_.assign(m, {});
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= m || e.v >= m)
      throw ParameterError("tree edge endpoint out of range");
    e = make_edge(e.u, e.v);
    t.adj_[e.u].push_back(e.v);
    t.adj_[e.v].push_back(e.u);
  }
  std::sort(edges.begin(), edges.end());
  t.edges_ = std::move(edges);
  for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());
  std::vector<int> order;
  t.parents(0, &order);
  if (static_cast<int>(order.size()) != m)
    throw ParameterError("tree edges do not connect all nodes");
  return t;
}

Tree Tree::path(int m) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < m; ++i) edges.push_back({i, i + 1});
  return from_edges(m, std::move(edges));
}

Tree Tree::star(int leaves) {
  std::vector<Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return from_edges(leaves + 1, std::move(edges));
}

int Tree::max_degree() const {
  int best = 0;
  for (const auto& nb : adj_) best = std::max(best, static_cast<int>(nb.size()));
  return best;
}

bool Tree::has_edge(int a, int b) const {
  if (a < 0 || a >= m_) return false;
  return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

std::vector<int> Tree::parents(int root, std::vector<int>* order) const {
  std::vector<int> parent(m_, -2);
  std::vector<int> local;
  std::vector<int>& bfs = order ? *order : local;
  bfs.clear();
  parent[root] = -1;
  bfs.push_back(root);
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    int x = bfs[head];
    for (int y : adj_[x]) {
      if (parent[y] != -2) continue;
      parent[y] = x;
      bfs.push_back(y);
    }
  }
  return parent;
}

std::vector<int> Tree::distances_from(int x) const {
  std::vector<int> dist(m_, -1);
  std::queue<int> q;
  dist[x] = 0;
  q.push(x);
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int b : adj_[a])
      if (dist[b] < 0) {
        dist[b] = dist[a] + 1;
        q.push(b);
      }
  }
  return dist;
}

Tree gen_random_bounded_tree(int m, int d, RandomSource& rng) {
  if (m < 1) throw ParameterError("tree size must be positive");
  if (m >= 3 && d < 2) throw ParameterError("trees on 3+ nodes need d >= 2");
  if (m == 2 && d < 1) throw ParameterError("an edge needs d >= 1");
  // Random recursive attachment restricted to nodes with spare degree.
  std::vector<int> degree(m, 0);
  std::vector<int> open{0};
  std::vector<Edge> edges;
  for (int x = 1; x < m; ++x) {
    auto slot = static_cast<std::size_t>(rng.uniform_below(open.size()));
    int y = open[slot];
    edges.push_back({y, x});
    if (++degree[y] == d) {
      open[slot] = open.back();
      open.pop_back();
    }
    if (++degree[x] < d) open.push_back(x);
  }
  std::vector<int> label(m);
  for (int i = 0; i < m; ++i) label[i] = i;
  rng.shuffle(std::span<int>(label));
  for (auto& e : edges) e = make_edge(label[e.u], label[e.v]);
  return Tree::from_edges(m, std::move(edges));
}

void write_tree(std::ostream& out, const Tree& t) {
  out << t.size() << '\n';
  std::vector<int> order;
  auto parent = t.parents(0, &order);
  for (std::size_t i = 1; i < order.size(); ++i)
    out << parent[order[i]] << ' ' << order[i] << '\n';
}

Tree read_tree(std::istream& in) {
  int m = 0;
  if (!(in >> m) || m < 1) throw ParameterError("tree: malformed node count");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < m; ++i) {
    int a = 0, b = 0;
    if (!(in >> a >> b)) throw ParameterError("tree: truncated edge list");
    edges.push_back({a, b});
  }
  return Tree::from_edges(m, std::move(edges));
}

TrimResult trim_to_size(const Tree& t, int target, RandomSource& rng) {
  const int m = t.size();
  if (target < 1 || target > m)
    throw ParameterError("trim_to_size: target must lie in [1, " +
                         std::to_string(m) + "]");
  std::vector<int> degree(m);
  std::vector<char> alive(m, 1);
  std::vector<int> leaves;
  std::vector<int> leaf_pos(m, -1);
  auto add_leaf = [&](int x) {
    leaf_pos[x] = static_cast<int>(leaves.size());
    leaves.push_back(x);
  };
  auto drop_leaf = [&](int x) {
    int pos = leaf_pos[x];
    int last = leaves.back();
    leaves[pos] = last;
    leaf_pos[last] = pos;
    leaves.pop_back();
    leaf_pos[x] = -1;
  };
  for (int x = 0; x < m; ++x) {
    degree[x] = t.degree(x);
    if (degree[x] <= 1) add_leaf(x);
  }
  TrimResult res;
  for (int remaining = m; remaining > target; --remaining) {
    int x = leaves[rng.uniform_below(leaves.size())];
    if (degree[x] > 1) throw ContractError("trim_to_size removed a non-leaf");
    drop_leaf(x);
    alive[x] = 0;
    res.removed.push_back(x);
    for (int y : t.neighbours(x)) {
      if (!alive[y]) continue;
      if (--degree[y] == 1) add_leaf(y);
    }
  }
  res.to_subtree.assign(m, -1);
  for (int x = 0; x < m; ++x)
    if (alive[x]) {
      res.to_subtree[x] = static_cast<int>(res.to_original.size());
      res.to_original.push_back(x);
    }
  std::vector<Edge> edges;
  for (const Edge& e : t.edges())
    if (alive[e.u] && alive[e.v])
      edges.push_back({res.to_subtree[e.u], res.to_subtree[e.v]});
  res.subtree = Tree::from_edges(target, std::move(edges));
  return res;
}

TreeDecomposition decompose_tree(const Tree& t, int d, double eps, double xi,
                                 int n) {
  const int m = t.size();
  if (!(eps >= 0.0 && eps < 1.0)) throw ParameterError("decompose_tree: eps must lie in [0,1)");
  if (!(xi > 0.0 && xi < 1.0)) throw ParameterError("decompose_tree: xi must lie in (0,1)");
  if (d < 2) throw ParameterError("decompose_tree: d must be at least 2");
  if (m > (1.0 - eps) * n + 1e-9)
    throw ParameterError("decompose_tree: tree larger than (1-eps)n");
  if (t.max_degree() > d) throw ParameterError("decompose_tree: tree degree exceeds d");
  TreeDecomposition dec;
  dec.upper = xi * n;
  dec.lower = dec.upper / d;
  if (dec.upper < d)
    throw ParameterError("decompose_tree: window infeasible (xi*n < d)");

  int root = 0;
  for (int x = 0; x < m; ++x)
    if (t.degree(x) <= 1) {
      root = x;
      break;
    }
  std::vector<int> order;
  auto parent = t.parents(root, &order);
  std::vector<int> size(m, 1);
  std::vector<char> cut(m, 0);
  std::vector<int> cut_order;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    for (int c : t.neighbours(v))
      if (c != parent[v] && !cut[c]) size[v] += size[c];
    while (size[v] > dec.upper) {
      int best = -1;
      for (int c : t.neighbours(v))
        if (c != parent[v] && !cut[c] && (best < 0 || size[c] > size[best])) best = c;
      if (best < 0 || size[best] < dec.lower - 1e-9)
        throw ContractError("decompose_tree: no child subtree inside the window");
      cut[best] = 1;
      cut_order.push_back(best);
      size[v] -= size[best];
    }
  }
  // Pieces: the root piece first, then cut pieces in reverse cut order.
  std::vector<int> head_index(m, -1);
  head_index[root] = 0;
  int s = 1 + static_cast<int>(cut_order.size());
  for (std::size_t k = 0; k < cut_order.size(); ++k)
    head_index[cut_order[k]] = s - 1 - static_cast<int>(k);
  dec.pieces.assign(s, {});
  dec.piece_of.assign(m, -1);
  dec.links.assign(s, {});
  for (int v : order) {
    int piece = (v == root || cut[v]) ? head_index[v] : dec.piece_of[parent[v]];
    dec.piece_of[v] = piece;
    if (v != root && cut[v]) dec.links[piece] = {v, parent[v]};
  }
  for (int v = 0; v < m; ++v) dec.pieces[dec.piece_of[v]].push_back(v);
  return dec;
}

std::vector<std::string> validate_decomposition(const Tree& t,
                                                const TreeDecomposition& dec) {
  std::vector<std::string> problems;
  const int m = t.size();
  const int s = dec.count();
  std::vector<int> seen(m, -1);
  for (int i = 0; i < s; ++i)
    for (int v : dec.pieces[i]) {
      if (v < 0 || v >= m) {
        problems.push_back("piece node out of range");
        continue;
      }
      if (seen[v] >= 0) problems.push_back("node " + std::to_string(v) + " in two pieces");
      seen[v] = i;
    }
  for (int v = 0; v < m; ++v)
    if (seen[v] < 0) problems.push_back("node " + std::to_string(v) + " uncovered");
  if (!problems.empty()) return problems;
  for (int i = 0; i < s; ++i) {
    auto size = static_cast<double>(dec.pieces[i].size());
    if (size > dec.upper + 1e-9)
      problems.push_back("piece " + std::to_string(i) + " above xi*n");
    if (i > 0 && size < dec.lower - 1e-9)
      problems.push_back("piece " + std::to_string(i) + " below xi*n/d");
    // Connectivity inside the piece.
    std::vector<int> stack{dec.pieces[i].front()};
    std::vector<char> vis(m, 0);
    vis[stack[0]] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++reached;
      for (int y : t.neighbours(x))
        if (!vis[y] && seen[y] == i) {
          vis[y] = 1;
          stack.push_back(y);
        }
    }
    if (reached != dec.pieces[i].size())
      problems.push_back("piece " + std::to_string(i) + " disconnected");
    if (i == 0) continue;
    int backward = 0;
    for (int x : dec.pieces[i])
      for (int y : t.neighbours(x))
        if (seen[y] < i) ++backward;
    if (backward != 1)
      problems.push_back("piece " + std::to_string(i) + " has " +
                         std::to_string(backward) + " edges to earlier pieces");
    const PieceLink& link = dec.links[i];
    if (link.inner < 0 || seen[link.inner] != i || link.outer < 0 ||
        seen[link.outer] >= i || !t.has_edge(link.inner, link.outer))
      problems.push_back("piece " + std::to_string(i) + " has a bad link record");
  }
  return problems;
}

void write_decomposition(std::ostream& out, const TreeDecomposition& dec) {
  out << "pieces " << dec.count() << " window " << dec.lower << ' ' << dec.upper << '\n';
  for (int i = 0; i < dec.count(); ++i) {
    out << "piece " << i;
    for (int v : dec.pieces[i]) out << ' ' << v;
    out << '\n';
    if (i > 0) out << "link " << i << ' ' << dec.links[i].inner << ' ' << dec.links[i].outer << '\n';
  }
}

RootSets compute_root_sets(const Tree& t, const TreeDecomposition& dec) {
  const int s = dec.count();
  RootSets rs;
  rs.z.assign(s, {});
  for (int j = 1; j < s; ++j) rs.z[dec.piece_of[dec.links[j].outer]].push_back(dec.links[j].inner);
  for (auto& z : rs.z) std::sort(z.begin(), z.end());
  rs.augmented.resize(s);
  std::vector<int> local(t.size(), -1);
  for (int i = 0; i < s; ++i) {
    AugmentedPiece& ap = rs.augmented[i];
    ap.nodes = dec.pieces[i];
    ap.nodes.insert(ap.nodes.end(), rs.z[i].begin(), rs.z[i].end());
    for (std::size_t k = 0; k < ap.nodes.size(); ++k) local[ap.nodes[k]] = static_cast<int>(k);
    std::vector<Edge> edges;
    for (const Edge& e : t.edges())
      if (local[e.u] >= 0 && local[e.v] >= 0) edges.push_back({local[e.u], local[e.v]});
    ap.tree = Tree::from_edges(static_cast<int>(ap.nodes.size()), std::move(edges));
    if (i > 0) ap.root = local[dec.links[i].inner];
    for (int v : ap.nodes) local[v] = -1;
  }
  return rs;
}

int i0_target(int n, int d, double eps) {
  double value = (n - (d + 1) * eps * n) / (static_cast<double>(d) * d + 1);
  if (value <= 0) return 0;
  return static_cast<int>(std::floor(value + 1e-9));
}

std::vector<int> build_I0(const Tree& t, const TrimResult& trim, int d,
                          double eps) {
  const int n = t.size();
  const int target = i0_target(n, d, eps);
  std::vector<int> chosen;
  if (target == 0) return chosen;
  const Tree& t0 = trim.subtree;
  std::vector<char> blocked(t0.size(), 0);
  std::vector<int> order;
  t0.parents(0, &order);
  for (int local : order) {
    if (static_cast<int>(chosen.size()) == target) break;
    if (blocked[local]) continue;
    int x = trim.to_original[local];
    bool closed = true;
    for (int y : t.neighbours(x))
      if (trim.to_subtree[y] < 0) {
        closed = false;
        break;
      }
    if (!closed) continue;
    chosen.push_back(x);
    blocked[local] = 1;
    for (int y : t0.neighbours(local)) {
      blocked[y] = 1;
      for (int z : t0.neighbours(y)) blocked[z] = 1;
    }
  }
  if (static_cast<int>(chosen.size()) < target)
    throw StructuralError("build_I0: greedy sweep found " +
                          std::to_string(chosen.size()) + " of " +
                          std::to_string(target) + " absorber nodes");
  return chosen;
}

}  // namespace rainbow
