#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/rng.hpp"
#include "rainbow/sparsify.hpp"

namespace rainbow {

/// Hidden coloured host graph whose pairs are revealed one at a time.
class HostModel {
 public:
  virtual ~HostModel() = default;
  virtual int n() const = 0;
  virtual int palette() const = 0;
  /// Colour of uv if it is an edge, nullopt otherwise.
  virtual std::optional<int> reveal(int u, int v) = 0;
  /// All edges inside `block`, with endpoints as indices into `block`.
  virtual std::vector<ColouredPair> reveal_block(std::span<const int> block) = 0;
};

/// G(n,p) with a uniform colouring, sampled lazily pair by pair.
class BinomialHost final : public HostModel {
 public:
  BinomialHost(int n, double p, int palette, RandomSource rng);
  int n() const override { return n_; }
  int palette() const override { return palette_; }
  double p() const { return p_; }
  std::optional<int> reveal(int u, int v) override;
  std::vector<ColouredPair> reveal_block(std::span<const int> block) override;

 private:
  int n_;
  double p_;
  int palette_;
  RandomSource rng_;
};

/// A fixed graph. Coloured graphs report their colours; an uncoloured graph
/// gets uniform colours from [palette] drawn at first reveal.
class FixedHost final : public HostModel {
 public:
  FixedHost(const ColouredGraph& g, int palette, RandomSource rng);
  explicit FixedHost(const ColouredGraph& g);
  int n() const override { return g_.n(); }
  int palette() const override { return palette_; }
  std::optional<int> reveal(int u, int v) override;
  std::vector<ColouredPair> reveal_block(std::span<const int> block) override;
  const ColouredGraph& graph() const { return g_; }

 private:
  int colour_for(int id);

  const ColouredGraph& g_;
  int palette_;
  RandomSource rng_;
  std::vector<int> drawn_;
};

/// Records every pair whose presence and colour has been revealed, so that
/// algorithms can be audited for never consulting unexposed randomness and
/// never exposing a pair twice.
class ExposureLedger {
 public:
  explicit ExposureLedger(HostModel& host);

  int n() const { return host_.n(); }
  int palette() const { return host_.palette(); }

  /// Reveals uv. Throws ContractError if uv was already exposed.
  std::optional<int> expose(int u, int v);
  /// Reveals all pairs inside a block. Throws ContractError if any vertex of
  /// the block was touched before.
  std::vector<ColouredPair> expose_block(std::span<const int> block);

  bool is_exposed(int u, int v) const;
  bool touches(int v) const { return touched_[v] != 0; }
  bool touches_any(std::span<const int> vertices) const;
  /// Colour of an exposed edge; nullopt for unexposed pairs and non-edges.
  std::optional<int> colour(int u, int v) const;
  std::size_t exposed_pair_count() const { return exposed_pairs_; }

 private:
  HostModel& host_;
  std::vector<int> block_of_;
  int blocks_ = 0;
  std::unordered_set<std::uint64_t> pairs_;
  std::unordered_map<std::uint64_t, int> present_;
  std::vector<char> touched_;
  std::size_t exposed_pairs_ = 0;
};

}  // namespace rainbow
