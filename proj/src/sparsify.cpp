#include "rainbow/sparsify.hpp"

#include <algorithm>

#include "rainbow/errors.hpp"

namespace rainbow {

ColourMask full_mask(int palette) { return ColourMask(palette, 1); }

SparsifyResult sparsify_exposed(int k, std::span<const ColouredPair> exposed,
                                int palette, const ColourMask& allowed, int m,
                                RandomSource& rng) {
  if (palette < 1) throw ParameterError("sparsify: palette must be positive");
  if (static_cast<int>(allowed.size()) != palette)
    throw ParameterError("sparsify: allowed-colour mask must span the palette");
  if (m < 0) throw ParameterError("sparsify: m must be non-negative");
  int allowed_count = static_cast<int>(std::count(allowed.begin(), allowed.end(), 1));
  if (m > allowed_count) throw ParameterError("sparsify: m exceeds |A|");

  SparsifyResult res;
  res.exposed_edges = static_cast<int>(exposed.size());
  // (S.3) reservoir-sample one edge per colour class E_c.
  std::vector<int> seen(palette, 0);
  std::vector<int> chosen(palette, -1);
  for (int i = 0; i < static_cast<int>(exposed.size()); ++i) {
    int c = exposed[i].colour;
    if (c < 0 || c >= palette) throw ParameterError("sparsify: colour outside palette");
    if (!allowed[c]) continue;
    if (rng.uniform_below(static_cast<std::uint64_t>(++seen[c])) == 0) chosen[c] = i;
  }
  // (S.4) everything not chosen is discarded, including colours outside A.
  std::vector<int> survivors;
  for (int c = 0; c < palette; ++c)
    if (allowed[c] && chosen[c] >= 0) survivors.push_back(chosen[c]);
  res.surviving = static_cast<int>(survivors.size());
  if (res.surviving < m) {
    res.status = SparsifyStatus::too_few_colours;
    res.graph = ColouredGraph(k);
    return res;
  }
  // (S.5) uniform m-subset of the survivors.
  for (int i = 0; i < m; ++i) {
    int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(res.surviving - i)));
    std::swap(survivors[i], survivors[j]);
  }
  std::vector<Edge> edges;
  std::vector<int> colours;
  for (int i = 0; i < m; ++i) {
    const ColouredPair& e = exposed[survivors[i]];
    edges.push_back({e.u, e.v});
    colours.push_back(e.colour);
  }
  res.graph = ColouredGraph::from_coloured_edges(k, std::move(edges), std::move(colours), palette);
  if (!is_rainbow(res.graph, res.graph.edges()))
    throw ContractError("sparsify produced a non-rainbow graph");
  return res;
}

SparsifyResult sparsify(std::span<const int> x, double p, int palette,
                        const ColourMask& allowed, int m, RandomSource& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sparsify: p must lie in [0,1]");
  if (palette < 1) throw ParameterError("sparsify: palette must be positive");
  const int k = static_cast<int>(x.size());
  // (S.1) + (S.2)
  std::vector<ColouredPair> exposed;
  for (int b = 1; b < k; ++b)
    for (int a = 0; a < b; ++a)
      if (rng.bernoulli(p))
        exposed.push_back({a, b, static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(palette)))});
  return sparsify_exposed(k, exposed, palette, allowed, m, rng);
}

}  // namespace rainbow
