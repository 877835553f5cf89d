#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace rainbow {

/// Counter-based random source. Output i of stream (seed, stream) is a pure
/// function of (seed, stream, i), so trials can be replayed independently
/// and child streams can be split off without touching the parent.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Uniform int in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  bool bernoulli(double p);
  /// Number of failures before the first success of a Bernoulli(p) sequence.
  std::uint64_t geometric(double p);

  /// Independent child stream; does not advance this source.
  RandomSource split(std::uint64_t child) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace rainbow
