#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/graph_io.hpp"
#include "rainbow/rng.hpp"

using namespace rainbow;

namespace {
ColouredGraph triangle(int a, int b, int c) {
  return ColouredGraph::from_coloured_edges(3, {{0, 1}, {0, 2}, {1, 2}}, {a, b, c}, 3);
}
}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("random source replays and splits") {
    RandomSource a(42, 3), b(42, 3), c(42, 4);
    std::vector<std::uint64_t> xa, xb, xc;
    for (int i = 0; i < 16; ++i) {
      xa.push_back(a());
      xb.push_back(b());
      xc.push_back(c());
    }
    CHECK(xa == xb);
    CHECK(xa != xc);
    RandomSource parent(5);
    auto before = parent.counter();
    auto child1 = parent.split(1);
    auto child2 = parent.split(1);
    CHECK(parent.counter() == before);
    CHECK(child1() == child2());
  }

  TEST_CASE("uniform_below is unbiased on a small range") {
    RandomSource rng(11);
    std::vector<long long> counts(5, 0);
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) ++counts[rng.uniform_below(5)];
    double stat = oracle::chi2_statistic(counts, trials / 5.0);
    CHECK(oracle::chi2_sf(stat, 4) > 0.001);
  }

  TEST_CASE("geometric mean matches (1-p)/p") {
    RandomSource rng(3);
    const double p = 0.05;
    double sum = 0;
    const int trials = 50000;
    for (int i = 0; i < trials; ++i) sum += static_cast<double>(rng.geometric(p));
    const double mean = (1 - p) / p;
    const double sd = std::sqrt((1 - p) / (p * p) / trials);
    CHECK(std::fabs(sum / trials - mean) < 4 * sd);
  }

  TEST_CASE("gen_gnp boundary probabilities") {
    RandomSource rng(1);
    CHECK(gen_gnp(5, 0.0, rng).edge_count() == 0);
    auto k5 = gen_gnp(5, 1.0, rng);
    CHECK(k5.edge_count() == 10);
    CHECK(k5.min_degree() == 4);
    CHECK_THROWS_AS(gen_gnp(5, 1.5, rng), ParameterError);
    CHECK_THROWS_AS(gen_gnp(5, -0.1, rng), ParameterError);
  }

  TEST_CASE("gen_gnp edge count moments at n=200, p=0.5") {
    RandomSource rng(2024);
    const int trials = 10000;
    double sum = 0;
    for (int i = 0; i < trials; ++i) sum += gen_gnp(200, 0.5, rng).edge_count();
    const double mean = sum / trials;
    const double sigma = std::sqrt(19900 * 0.25);
    // the mean of 10^4 draws has standard error sigma/100
    CHECK(std::fabs(mean - 9950) < 3 * sigma);
    CHECK(std::fabs(mean - 9950) < 4 * sigma / 100);
  }

  TEST_CASE("gen_gnp sparse path has symmetric pair marginals") {
    // geometric skipping (p < 0.1) must not favour any pair
    RandomSource rng(77);
    const int n = 6, trials = 40000;
    std::vector<long long> counts(15, 0);
    long long total = 0;
    for (int t = 0; t < trials; ++t) {
      auto g = gen_gnp(n, 0.05, rng);
      for (const auto& e : g.edges()) {
        int idx = 0;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b, ++idx)
            if (a == e.u && b == e.v) ++counts[idx];
        ++total;
      }
    }
    const double stat = oracle::chi2_statistic(counts, total / 15.0);
    CHECK(oracle::chi2_sf(stat, 14) > 0.001);
    CHECK(std::fabs(total / (15.0 * trials) - 0.05) < 0.003);
  }

  TEST_CASE("gen_seed_graph kinds") {
    RandomSource rng(4);
    auto k10 = gen_seed_graph(10, 0.5, {SeedKind::complete, 2, 0}, rng);
    CHECK(k10.edge_count() == 45);
    CHECK(k10.min_degree() == 9);
    auto two_k5 = gen_seed_graph(10, 0.3, {SeedKind::clique_union, 2, 0}, rng);
    CHECK(two_k5.min_degree() == 4);
    CHECK(two_k5.edge_count() == 20);
    CHECK_THROWS_AS(gen_seed_graph(10, 0.95, {SeedKind::clique_union, 2, 0}, rng), ParameterError);
    for (auto kind : {SeedKind::multipartite, SeedKind::random_supergraph, SeedKind::clique_union}) {
      auto g = gen_seed_graph(60, 0.4, {kind, 2, 0}, rng);
      CHECK(g.min_degree() >= 24);
    }
    CHECK(parse_seed_kind("clique-union") == SeedKind::clique_union);
    CHECK(to_string(SeedKind::random_supergraph) == "random-supergraph");
  }

  TEST_CASE("perturb keeps the seed and flags the random part") {
    RandomSource rng(5);
    auto k4 = gen_seed_graph(4, 0.5, {SeedKind::complete, 2, 0}, rng);
    auto same = perturb(k4, 0.0, rng);
    CHECK(same.edges() == k4.edges());
    int flagged = 0;
    for (std::size_t i = 0; i < same.edge_count(); ++i) flagged += same.in_random_part(static_cast<int>(i));
    CHECK(flagged == 0);

    auto seed = gen_seed_graph(30, 0.4, {SeedKind::clique_union, 2, 0}, rng);
    auto g = perturb(seed, 0.1, rng);
    for (const auto& e : seed.edges()) CHECK(g.has_edge(e.u, e.v));
    auto back = g.without_random_part();
    for (const auto& e : back.edges()) CHECK(seed.has_edge(e.u, e.v));
    // every non-seed edge must be flagged
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto& e = g.edges()[i];
      if (!seed.has_edge(e.u, e.v)) CHECK(g.in_random_part(static_cast<int>(i)));
    }
  }

  TEST_CASE("uniform_colouring") {
    RandomSource rng(6);
    auto k4 = gen_seed_graph(4, 0.5, {SeedKind::complete, 2, 0}, rng);
    auto one = uniform_colouring(k4, 1, rng);
    for (int c : one.colours()) CHECK(c == 0);
    auto empty = uniform_colouring(ColouredGraph(7), 5, rng);
    CHECK(empty.colours().empty());
    CHECK_THROWS_AS(uniform_colouring(k4, 0, rng), ParameterError);

    // per-edge colour frequencies over 10^5 colourings of K4 with k=3
    const int trials = 100000;
    for (int edge = 0; edge < 6; ++edge) {
      std::vector<long long> counts(3, 0);
      RandomSource r2(100 + edge);
      for (int t = 0; t < trials; ++t) ++counts[uniform_colouring(k4, 3, r2).colour(edge)];
      const double stat = oracle::chi2_statistic(counts, trials / 3.0);
      CHECK(stat < oracle::chi2_critical_001(2));
    }
  }

  TEST_CASE("is_rainbow and distinct_colours") {
    auto t = triangle(0, 1, 2);
    std::vector<Edge> all = t.edges();
    CHECK(is_rainbow(t, all));
    auto mono = triangle(0, 0, 1);
    CHECK_FALSE(is_rainbow(mono, all));
    std::vector<Edge> one{{0, 1}};
    CHECK(is_rainbow(mono, one));
    std::vector<Edge> missing{{0, 5}};
    CHECK_THROWS_AS(is_rainbow(t, missing), DomainError);
    // is_rainbow(S) iff distinct colours = |S| on every subset
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<Edge> s;
      for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) s.push_back(all[i]);
      std::set<int> cols;
      for (const auto& e : s) cols.insert(*mono.colour_of(e.u, e.v));
      CHECK(is_rainbow(mono, s) == (cols.size() == s.size()));
      CHECK(distinct_colours(mono, s) == static_cast<int>(cols.size()));
    }
  }

  TEST_CASE("external_neighbourhood") {
    RandomSource rng(7);
    auto k4 = gen_seed_graph(4, 0.5, {SeedKind::complete, 2, 0}, rng);
    std::vector<int> x0{0};
    CHECK(external_neighbourhood(k4, x0) == std::vector<int>{1, 2, 3});
    auto path = ColouredGraph::from_edges(3, {{0, 1}, {1, 2}});
    std::vector<int> x1{1};
    CHECK(external_neighbourhood(path, x1) == std::vector<int>{0, 2});
    std::vector<int> all{0, 1, 2};
    CHECK(external_neighbourhood(path, all).empty());
    // monotone under adding an edge
    auto bigger = ColouredGraph::from_edges(4, {{0, 1}, {1, 2}});
    auto plus = ColouredGraph::from_edges(4, {{0, 1}, {1, 2}, {1, 3}});
    CHECK(external_neighbourhood(bigger, x1).size() <= external_neighbourhood(plus, x1).size());
  }

  TEST_CASE("edge list round trip") {
    RandomSource rng(8);
    auto g = uniform_colouring(gen_gnp(25, 0.3, rng), 9, rng);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    auto back = read_edge_list(in);
    CHECK(back.n() == g.n());
    CHECK(back.edges() == g.edges());
    CHECK(back.colours() == g.colours());
    std::ostringstream again;
    write_edge_list(again, back);
    CHECK(again.str() == out.str());

    auto plain = gen_gnp(6, 0.5, rng);
    std::ostringstream p;
    write_edge_list(p, plain);
    CHECK(p.str().rfind("6 0\n", 0) == 0);

    std::istringstream bad("3 0\n0 7\n");
    CHECK_THROWS(read_edge_list(bad));
  }
}
