#pragma once

#include <span>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Membership mask over a palette: mask[c] != 0 iff colour c is allowed.
using ColourMask = std::vector<char>;

ColourMask full_mask(int palette);

struct ColouredPair {
  int u = 0;
  int v = 0;
  int colour = 0;
};

enum class SparsifyStatus { ok, too_few_colours };

struct SparsifyResult {
  SparsifyStatus status = SparsifyStatus::ok;
  ColouredGraph graph;        // on local vertices; vertex i is x[i]
  int exposed_edges = 0;      // edges present after (S.1)
  int surviving = 0;          // edges left after (S.4)
  bool ok() const { return status == SparsifyStatus::ok; }
};

/// Rainbow sparsification of G(|x|, p) coloured from [palette]:
/// (S.1) keep each pair with probability p, (S.2) colour uniformly,
/// (S.3) one uniform edge per allowed colour, (S.4) drop the rest,
/// (S.5) keep m uniformly chosen survivors.
SparsifyResult sparsify(std::span<const int> x, double p, int palette,
                        const ColourMask& allowed, int m, RandomSource& rng);

/// Steps (S.3)-(S.5) on an already exposed coloured edge set over local
/// vertices 0..k-1.
SparsifyResult sparsify_exposed(int k, std::span<const ColouredPair> exposed,
                                int palette, const ColourMask& allowed, int m,
                                RandomSource& rng);

}  // namespace rainbow
