#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "rainbow/embedder.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/exposure.hpp"

using namespace rainbow;

namespace {
ColouredGraph complete(int n) {
  std::vector<Edge> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) e.push_back({a, b});
  return ColouredGraph::from_edges(n, e);
}

// Embedding check written against the host graph directly.
bool valid_copy(const ColouredGraph& h, const Tree& t, const std::vector<int>& f, bool rainbow) {
  if (static_cast<int>(f.size()) != t.size()) return false;
  std::set<int> image(f.begin(), f.end());
  if (static_cast<int>(image.size()) != t.size()) return false;
  std::set<int> colours;
  for (const auto& e : t.edges()) {
    auto c = h.colour_of(f[e.u], f[e.v]);
    if (!h.has_edge(f[e.u], f[e.v])) return false;
    if (rainbow && !colours.insert(*c).second) return false;
  }
  return true;
}

ColourLookup lookup(const ColouredGraph& g) {
  return [&g](int a, int b) { return g.colour_of(a, b); };
}
}  // namespace

TEST_SUITE("embedder") {
  TEST_CASE("derive_parameters: zeta from the slack") {
    auto a = derive_parameters(0.5, 2, 1000000);
    CHECK(a.zeta == doctest::Approx(0.5));
    auto b = derive_parameters(0.2, 2, 1000000);
    CHECK(b.zeta == doctest::Approx(0.125));
    // beta and rho at their caps with constant 1/100
    CHECK(b.beta == doctest::Approx(0.01 * 0.125 * 0.2 / (16 * std::log(8.0))));
    CHECK(b.rho == doctest::Approx(0.002));
    CHECK(b.reservoir_size == 2000);
    CHECK(b.block_size(100) == 119);
    CHECK_THROWS_AS(derive_parameters(0.0, 2, 100), ParameterError);
    CHECK_THROWS_AS(derive_parameters(1.0, 2, 100), ParameterError);
    CHECK_THROWS_AS(derive_parameters(0.2, 1, 100), ParameterError);
  }

  TEST_CASE("derive_parameters: desk-scale infeasibility names the minimum n") {
    try {
      derive_parameters(0.2, 3, 1000);
      FAIL("expected infeasibility");
    } catch (const InfeasibleParameters& e) {
      auto p = derive_parameters(0.2, 3, static_cast<int>(e.min_n()));
      CHECK(p.xi * p.n / 3 >= 1.0 - 1e-9);
    }
  }

  TEST_CASE("derive_parameters: blocks of a full decomposition fit in n") {
    PipelineKnobs knobs;
    knobs.c_beta = 400;
    const int n = 1000;
    const double eps = 0.2;
    auto p = derive_parameters(eps, 3, n, knobs);
    RandomSource rng(1);
    auto t = gen_random_bounded_tree(n - static_cast<int>(eps * n), 3, rng);
    auto dec = decompose_tree(t, 3, eps, p.xi, n);
    auto rs = compute_root_sets(t, dec);
    long long total = 0;
    for (const auto& ap : rs.augmented) total += p.block_size(ap.tree.size());
    CHECK(total <= n);
    CHECK(dec.count() <= p.s_bound);
  }

  TEST_CASE("embed_rooted_tree examples") {
    RandomSource rng(2);
    auto k5 = complete(5);
    auto single = embed_rooted_tree(k5, Tree::single_node(), 0, 3, rng);
    CHECK(single.ok);
    CHECK(single.map == std::vector<int>{3});
    for (int root = 0; root < 5; ++root) {
      auto r = embed_rooted_tree(k5, Tree::path(3), 1, root, rng);
      REQUIRE(r.ok);
      CHECK(r.map[1] == root);
      CHECK(valid_copy(k5, Tree::path(3), r.map, false));
    }
    std::vector<Edge> c;
    for (int a = 0; a < 5; ++a) c.push_back(make_edge(a, (a + 1) % 5));
    auto c5 = ColouredGraph::from_edges(5, c);
    CHECK_FALSE(embed_rooted_tree(c5, Tree::star(4), 0, std::nullopt, rng).ok);
    CHECK_THROWS_AS(embed_rooted_tree(c5, Tree::path(6), 0, std::nullopt, rng), ParameterError);
  }

  TEST_CASE("embed_rooted_tree on random dense hosts") {
    for (int seed = 0; seed < 20; ++seed) {
      RandomSource rng(seed);
      auto h = gen_gnp(80, 0.15, rng);
      auto t = gen_random_bounded_tree(60, 3, rng);
      auto r = embed_rooted_tree(h, t, 0, std::nullopt, rng);
      if (r.ok) CHECK(valid_copy(h, t, r.map, false));
    }
    // spanning a path inside K_n always works
    RandomSource rng(9);
    auto r = embed_rooted_tree(complete(12), Tree::path(12), 0, 0, rng);
    CHECK(r.ok);
  }

  TEST_CASE("exposure ledger discipline") {
    auto k6 = complete(6);
    FixedHost host(k6, 10, RandomSource(3));
    ExposureLedger ledger(host);
    auto c = ledger.expose(0, 1);
    REQUIRE(c.has_value());
    CHECK(*c >= 0);
    CHECK(*c < 10);
    CHECK(ledger.is_exposed(1, 0));
    CHECK(ledger.colour(0, 1) == c);
    CHECK_FALSE(ledger.colour(0, 2).has_value());
    CHECK_THROWS_AS(ledger.expose(1, 0), ContractError);
    std::vector<int> block{1, 2, 3};
    CHECK_THROWS_AS(ledger.expose_block(block), ContractError);
    std::vector<int> fresh{2, 3, 4};
    auto pairs = ledger.expose_block(fresh);
    CHECK(pairs.size() == 3);
    CHECK(ledger.exposed_pair_count() == 4);
    CHECK(ledger.touches(4));
    CHECK_FALSE(ledger.touches(5));

    // an uncoloured fixed host draws each colour once and remembers it
    FixedHost again(k6, 10, RandomSource(3));
    CHECK(again.reveal(0, 1) == again.reveal(1, 0));
    CHECK_FALSE(FixedHost(ColouredGraph(3), 4, RandomSource(0)).reveal(0, 1).has_value());
  }

  TEST_CASE("select_root_edges") {
    auto k30 = complete(30);
    FixedHost host(k30, 1000, RandomSource(4));
    ExposureLedger ledger(host);
    std::vector<int> cand;
    for (int v = 1; v < 30; ++v) cand.push_back(v);
    auto none = select_root_edges(ledger, 0, cand, full_mask(1000), 0);
    CHECK(none.ok);
    CHECK(none.targets.empty());
    CHECK(none.exposed == 0);

    auto sel = select_root_edges(ledger, 0, cand, full_mask(1000), 16);
    CHECK(sel.ok);
    CHECK(sel.targets.size() == 16);
    CHECK(sel.exposed == 29);
    std::set<int> cols(sel.colours.begin(), sel.colours.end());
    CHECK(cols.size() == 16);
    for (std::size_t i = 0; i < sel.targets.size(); ++i)
      CHECK(ledger.colour(0, sel.targets[i]) == sel.colours[i]);
    CHECK_THROWS_AS(select_root_edges(ledger, 0, cand, full_mask(1000), 1), ContractError);

    std::vector<int> cand1;
    for (int v = 2; v < 30; ++v) cand1.push_back(v);
    auto empty = select_root_edges(ledger, 1, cand1, ColourMask(1000, 0), 1);
    CHECK_FALSE(empty.ok);
    CHECK(empty.exposed == 28);
    CHECK(ledger.is_exposed(1, 29));
  }

  TEST_CASE("colour_coverage") {
    std::vector<int> cols{0, 0, 1};
    CHECK(colour_coverage(cols, ColourMask{1, 1, 1}) == 2);
    CHECK(colour_coverage(cols, ColourMask{0, 0, 0}) == 0);
    CHECK(colour_coverage(cols, ColourMask{0, 1, 1}) == 1);
  }

  TEST_CASE("trace line format") {
    CHECK(format_trace_line({"sparsify", false, "i=2 m=10"}) == "stage=sparsify status=fail detail=i=2 m=10");
    CHECK(format_trace_line({"embed", true, ""}) == "stage=embed status=ok detail=");
  }

  TEST_CASE("check_embedding flags each violation") {
    auto g = ColouredGraph::from_coloured_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1, 1, 2}, 3);
    auto p3 = Tree::path(3);
    CHECK(check_embedding(p3, std::vector<int>{3, 0, 1}, 4, lookup(g)).empty());
    CHECK_FALSE(check_embedding(p3, std::vector<int>{1, 2, 3}, 4, lookup(g)).empty());  // colour 1 twice
    CHECK_FALSE(check_embedding(p3, std::vector<int>{0, 2, 1}, 4, lookup(g)).empty());  // 0-2 absent
    CHECK_FALSE(check_embedding(p3, std::vector<int>{0, 1, 0}, 4, lookup(g)).empty());  // not injective
    CHECK_FALSE(check_embedding(p3, std::vector<int>{3, 0, 1}, 4, lookup(g), true).empty());  // not spanning
  }

  TEST_CASE("embed_almost_spanning: single node") {
    RandomSource rng(5);
    auto r = embed_almost_spanning(50, 0.1, 50, Tree::single_node(), 0.25, 3, rng);
    CHECK(r.ok);
    CHECK(r.embedding.size() == 1);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].stage == "trivial");
  }

  TEST_CASE("embed_almost_spanning: faithful constants fail at the parameters stage") {
    RandomSource rng(6);
    auto t = gen_random_bounded_tree(375, 3, rng);
    auto r = embed_almost_spanning(500, 10 * std::log(500.0) / 500, 500, t, 0.25, 3, rng);
    CHECK_FALSE(r.ok);
    CHECK(r.failed_stage == "parameters");
  }

  TEST_CASE("embed_almost_spanning: dense regime successes pass an independent check") {
    PipelineKnobs knobs;
    knobs.c_beta = 600;
    knobs.c_rho = 1;
    knobs.target_degree = 12;
    const int n = 200;
    const double eps = 0.3;
    int successes = 0;
    for (int seed = 0; seed < 10; ++seed) {
      RandomSource rng(seed);
      auto g = uniform_colouring(gen_gnp(n, 1.0, rng), 3 * n, rng);
      FixedHost host(g);
      ExposureLedger ledger(host);
      auto t = gen_random_bounded_tree(n - static_cast<int>(eps * n), 3, rng);
      auto r = embed_almost_spanning(ledger, t, eps, 3, rng, knobs);
      CHECK(r.validity_problems.empty());
      if (!r.ok) continue;
      ++successes;
      CHECK(valid_copy(g, t, r.embedding, true));
      CHECK(r.reservoir_used <= r.reservoir_bound);
      // every tree edge was exposed through the ledger
      for (const auto& e : t.edges()) CHECK(ledger.is_exposed(r.embedding[e.u], r.embedding[e.v]));
    }
    CHECK(successes >= 3);
  }

  TEST_CASE("embed_almost_spanning rejects oversized trees") {
    RandomSource rng(7);
    auto t = gen_random_bounded_tree(90, 3, rng);
    CHECK_THROWS_AS(embed_almost_spanning(100, 0.5, 100, t, 0.25, 3, rng), ParameterError);
    CHECK_THROWS_AS(embed_almost_spanning(100, 0.5, 100, Tree::star(5), 0.25, 3, rng), ParameterError);
  }
}
