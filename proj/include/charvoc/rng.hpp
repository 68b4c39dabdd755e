#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace charvoc {

/// Sampling helpers over any 64-bit generator (std::mt19937_64, KeyStream).
/// Every mapping is spelled out here so seeded results never depend on the
/// standard library's distribution implementations.
template <class G>
class Sampler {
public:
  explicit Sampler(G& gen) : gen_(gen) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, n) by rejection sampling; n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t lim = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = gen_();
    while (x < lim) x = gen_();
    return x % n;
  }

  std::uint32_t digit() { return static_cast<std::uint32_t>(below(10)); }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  std::vector<std::uint32_t> permutation(std::uint32_t n) {
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    shuffle(std::span<std::uint32_t>(p));
    return p;
  }

private:
  G& gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace charvoc
