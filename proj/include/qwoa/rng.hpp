#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace qwoa {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. All distributions are derived here from raw 64-bit draws, so
/// streams do not depend on the standard library's distribution classes.
///
/// Stream splitting: `child(k)` returns a generator keyed by
/// splitmix64(key ^ splitmix64(k + golden)), where `key` is this generator's
/// key. The parent's state is not consumed, so child k can be built without
/// generating children 0..k-1.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : Rng(KeyTag{}, splitmix64(seed)) {}

  [[nodiscard]] Rng child(std::uint64_t index) const {
    return Rng(KeyTag{}, splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
  }

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % bound;
  }

  template <class T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

private:
  struct KeyTag {};
  Rng(KeyTag, std::uint64_t key) : key_(key), engine_(key) {}

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

} // namespace qwoa
