#include <doctest.h>

#include <set>
#include <vector>

#include "oracles.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/spanning.hpp"

using namespace rainbow;

namespace {
ColouredGraph complete(int n) {
  std::vector<Edge> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) e.push_back({a, b});
  return ColouredGraph::from_edges(n, e);
}

ColouredGraph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.push_back(make_edge(i, (i + 1) % 5));
    e.push_back(make_edge(i, i + 5));
    e.push_back(make_edge(5 + i, 5 + (i + 2) % 5));
  }
  return ColouredGraph::from_edges(10, e);
}

ColouredGraph two_cliques(int size) {
  std::vector<Edge> e;
  for (int base : {0, size})
    for (int a = 0; a < size; ++a)
      for (int b = a + 1; b < size; ++b) e.push_back({base + a, base + b});
  return ColouredGraph::from_edges(2 * size, e);
}

std::vector<oracle::PlainEdge> plain(const ColouredGraph& g) {
  std::vector<oracle::PlainEdge> out;
  for (std::size_t id = 0; id < g.edge_count(); ++id)
    out.push_back({g.edges()[id].u, g.edges()[id].v, g.colour(static_cast<int>(id))});
  return out;
}

void check_tree(const ColouredGraph& g, const std::vector<int>& ids) {
  const int n = g.n();
  CHECK(static_cast<int>(ids.size()) == n - 1);
  oracle::Dsu dsu(n);
  std::set<int> colours;
  for (int id : ids) {
    const auto& e = g.edges()[id];
    CHECK(dsu.unite(e.u, e.v));  // acyclic
    CHECK(colours.insert(g.colour(id)).second);  // rainbow
  }
  for (int v = 1; v < n; ++v) CHECK(dsu.find(v) == dsu.find(0));  // spanning, connected
}
}  // namespace

TEST_SUITE("spanning") {
  TEST_CASE("vertex_connectivity") {
    for (int n = 2; n <= 7; ++n) CHECK(vertex_connectivity(complete(n)) == n - 1);
    auto p4 = ColouredGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(vertex_connectivity(p4) == 1);
    CHECK(vertex_connectivity(petersen()) == 3);
    CHECK(vertex_connectivity(two_cliques(4)) == 0);
    auto cut = min_vertex_cut(p4);
    CHECK(cut.size() == 1);
    CHECK((cut[0] == 1 || cut[0] == 2));
    CHECK(min_vertex_cut(complete(5)).empty());
    CHECK(min_vertex_cut(petersen()).size() == 3);
  }

  TEST_CASE("vertex_connectivity agrees with exhaustive cut search") {
    RandomSource rng(1);
    for (int t = 0; t < 150; ++t) {
      const int n = rng.uniform_int(2, 8);
      auto g = gen_gnp(n, 0.3 + 0.6 * rng.uniform01(), rng);
      // smallest S whose removal disconnects or leaves one vertex
      int best = n - 1;
      for (std::uint32_t s = 0; s < (1u << n); ++s) {
        const int size = __builtin_popcount(s);
        if (size >= best || n - size < 2) continue;
        oracle::Dsu dsu(n);
        int comps = n - size;
        for (const auto& e : g.edges())
          if (!(s >> e.u & 1) && !(s >> e.v & 1) && dsu.unite(e.u, e.v)) --comps;
        if (comps > 1) best = size;
      }
      CHECK(vertex_connectivity(g) == best);
    }
  }

  TEST_CASE("highly_connected_partition examples") {
    auto k12 = complete(12);
    auto single = highly_connected_partition(k12, 11);
    CHECK(single.size() == 1);
    CHECK(single.is_valid(12));

    auto two = highly_connected_partition(two_cliques(5), 4);
    REQUIRE(two.size() == 2);
    CHECK(two.blocks[0] == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(two.blocks[1] == std::vector<int>{5, 6, 7, 8, 9});
    auto audit = audit_partition(two_cliques(5), two, 4);
    CHECK(audit.threshold == 1);
    CHECK(audit.ok());

    CHECK_THROWS_AS(highly_connected_partition(two_cliques(5), 5), ParameterError);
    CHECK_THROWS_AS(highly_connected_partition(k12, 0), ParameterError);
  }

  TEST_CASE("highly_connected_partition passes its audits on dense seeds") {
    RandomSource rng(2);
    for (int t = 0; t < 10; ++t) {
      auto g = gen_seed_graph(60, 0.4, {SeedKind::random_supergraph, 2, 0}, rng);
      const int k = g.min_degree();
      auto part = highly_connected_partition(g, k);
      CHECK(part.is_valid(60));
      auto audit = audit_partition(g, part, k);
      CHECK(audit.ok());
    }
  }

  TEST_CASE("audit_partition catches a bad block") {
    auto g = two_cliques(5);
    VertexPartition whole{{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}};
    CHECK_FALSE(audit_partition(g, whole, 4).ok());  // disconnected block
    VertexPartition overlap{{{0, 1, 2, 3, 4}, {4, 5, 6, 7, 8, 9}}};
    CHECK_FALSE(overlap.is_valid(10));
  }

  TEST_CASE("suzuki_check examples") {
    auto rainbow = ColouredGraph::from_coloured_edges(3, {{0, 1}, {0, 2}, {1, 2}}, {0, 1, 2}, 3);
    CHECK(suzuki_check(rainbow).holds);
    auto mono = ColouredGraph::from_coloured_edges(3, {{0, 1}, {0, 2}, {1, 2}}, {0, 0, 0}, 1);
    auto res = suzuki_check(mono);
    CHECK_FALSE(res.holds);
    CHECK(res.witness.size() == 3);
    auto split = ColouredGraph::from_coloured_edges(4, {{0, 1}, {2, 3}}, {0, 1}, 2);
    CHECK_FALSE(suzuki_check(split).holds);
    CHECK_THROWS_AS(suzuki_check(complete(13)), CapacityError);
  }

  TEST_CASE("find_rainbow_spanning_tree examples") {
    auto path = ColouredGraph::from_coloured_edges(4, {{0, 1}, {1, 2}, {2, 3}}, {2, 0, 1}, 3);
    auto t = find_rainbow_spanning_tree(path);
    REQUIRE(t);
    check_tree(path, *t);
    auto mono = ColouredGraph::from_coloured_edges(3, {{0, 1}, {0, 2}, {1, 2}}, {0, 0, 0}, 1);
    CHECK_FALSE(find_rainbow_spanning_tree(mono).has_value());
    auto split = ColouredGraph::from_coloured_edges(4, {{0, 1}, {2, 3}}, {0, 1}, 2);
    CHECK_FALSE(find_rainbow_spanning_tree(split).has_value());
  }

  TEST_CASE("finder, criterion and brute force agree on random small graphs") {
    RandomSource rng(3);
    int with_tree = 0;
    for (int t = 0; t < 600; ++t) {
      const int n = rng.uniform_int(2, 7);
      auto g = uniform_colouring(gen_gnp(n, 0.3 + 0.7 * rng.uniform01(), rng), rng.uniform_int(1, n + 1), rng);
      const bool brute = oracle::connected(n, plain(g)) && oracle::has_rainbow_spanning_tree(n, plain(g));
      auto found = find_rainbow_spanning_tree(g);
      CHECK(found.has_value() == brute);
      CHECK(suzuki_check(g).holds == brute);
      if (found) {
        check_tree(g, *found);
        ++with_tree;
      }
    }
    CHECK(with_tree > 50);
  }

  TEST_CASE("finder scales to a coloured perturbed graph") {
    RandomSource rng(4);
    auto seed = gen_seed_graph(150, 0.4, {SeedKind::clique_union, 2, 0}, rng);
    auto g = uniform_colouring(perturb(seed, 0.001, rng), 149, rng);
    auto t = find_rainbow_spanning_tree(g);
    if (t) check_tree(g, *t);
  }

  TEST_CASE("check_crossing_edges") {
    auto k10 = complete(10);
    VertexPartition one{{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}};
    CHECK(check_crossing_edges(k10, one, 2));
    VertexPartition halves{{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}};
    CHECK(check_crossing_edges(k10, halves, 2));
    auto joined = ColouredGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    VertexPartition cut{{{0, 1}, {2, 3}}};
    CHECK_FALSE(check_crossing_edges(joined, cut, 2));
  }
}
