#include "rainbow/exposure.hpp"

#include "rainbow/errors.hpp"

namespace rainbow {

BinomialHost::BinomialHost(int n, double p, int palette, RandomSource rng)
    : n_(n), p_(p), palette_(palette), rng_(rng) {
  if (n < 0) throw ParameterError("host: n must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("host: p must lie in [0,1]");
  if (palette < 1) throw ParameterError("host: palette must be positive");
}

std::optional<int> BinomialHost::reveal(int, int) {
  if (!rng_.bernoulli(p_)) return std::nullopt;
  return static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(palette_)));
}

std::vector<ColouredPair> BinomialHost::reveal_block(std::span<const int> block) {
  ColouredGraph inner = gen_gnp(static_cast<int>(block.size()), p_, rng_);
  std::vector<ColouredPair> out;
  out.reserve(inner.edge_count());
  for (const Edge& e : inner.edges())
    out.push_back({e.u, e.v, static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(palette_)))});
  return out;
}

FixedHost::FixedHost(const ColouredGraph& g, int palette, RandomSource rng)
    : g_(g), palette_(palette), rng_(rng), drawn_(g.edge_count(), -1) {
  if (g.is_coloured() && g.palette() != palette)
    throw ParameterError("host: palette disagrees with the graph colouring");
  if (palette < 1) throw ParameterError("host: palette must be positive");
}

FixedHost::FixedHost(const ColouredGraph& g) : FixedHost(g, g.palette(), RandomSource(0)) {}

int FixedHost::colour_for(int id) {
  if (g_.is_coloured()) return g_.colour(id);
  if (drawn_[id] < 0)
    drawn_[id] = static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(palette_)));
  return drawn_[id];
}

std::optional<int> FixedHost::reveal(int u, int v) {
  auto id = g_.edge_id(u, v);
  if (!id) return std::nullopt;
  return colour_for(*id);
}

std::vector<ColouredPair> FixedHost::reveal_block(std::span<const int> block) {
  std::unordered_map<int, int> local;
  for (std::size_t i = 0; i < block.size(); ++i) local.emplace(block[i], static_cast<int>(i));
  std::vector<ColouredPair> out;
  for (std::size_t i = 0; i < block.size(); ++i)
    for (int w : g_.neighbours(block[i])) {
      auto it = local.find(w);
      if (it == local.end() || it->second <= static_cast<int>(i)) continue;
      out.push_back({static_cast<int>(i), it->second, colour_for(*g_.edge_id(block[i], w))});
    }
  return out;
}

ExposureLedger::ExposureLedger(HostModel& host)
    : host_(host), block_of_(host.n(), -1), touched_(host.n(), 0) {}

std::optional<int> ExposureLedger::expose(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n() || v >= n())
    throw DomainError("ledger: invalid pair");
  if (is_exposed(u, v))
    throw ContractError("ledger: pair " + std::to_string(u) + "-" + std::to_string(v) +
                        " exposed twice");
  auto key = pair_key(u, v);
  pairs_.insert(key);
  touched_[u] = touched_[v] = 1;
  ++exposed_pairs_;
  auto colour = host_.reveal(u, v);
  if (colour) present_.emplace(key, *colour);
  return colour;
}

std::vector<ColouredPair> ExposureLedger::expose_block(std::span<const int> block) {
  for (int v : block) {
    if (v < 0 || v >= n()) throw DomainError("ledger: block vertex out of range");
    if (touched_[v]) throw ContractError("ledger: block vertex " + std::to_string(v) + " already touched");
  }
  int id = blocks_++;
  for (int v : block) {
    block_of_[v] = id;
    touched_[v] = 1;
  }
  auto k = static_cast<std::size_t>(block.size());
  exposed_pairs_ += k * (k - (k ? 1 : 0)) / 2;
  auto edges = host_.reveal_block(block);
  for (const auto& e : edges) present_.emplace(pair_key(block[e.u], block[e.v]), e.colour);
  return edges;
}

bool ExposureLedger::is_exposed(int u, int v) const {
  if (block_of_[u] >= 0 && block_of_[u] == block_of_[v]) return true;
  return pairs_.count(pair_key(u, v)) != 0;
}

bool ExposureLedger::touches_any(std::span<const int> vertices) const {
  for (int v : vertices)
    if (touched_[v]) return true;
  return false;
}

std::optional<int> ExposureLedger::colour(int u, int v) const {
  auto it = present_.find(pair_key(u, v));
  if (it == present_.end()) return std::nullopt;
  return it->second;
}

}  // namespace rainbow
