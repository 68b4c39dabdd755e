#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "charvoc/bitvec.hpp"
#include "charvoc/encoding.hpp"

namespace charvoc {

/// The user's memorized secret (PIN digits, passphrase, ...), kept as raw
/// octets. Must be non-empty when used.
struct SecretKey {
  std::string bytes;
};

/// One block of the selected 256-bit hash.
std::array<std::uint8_t, 32> digest256(HashId id, std::span<const std::uint8_t> data);

/// Deterministic byte stream keyed by (key, label): block j is
/// BaseHash(key || label || uint32_be(j)). The label-less stream is the
/// expansion behind hash_key; baseline transforms use a per-slot label.
class KeyStream {
public:
  KeyStream(const SecretKey& key, HashId id, std::string label = {});

  std::uint8_t next_byte();

  /// Next 8 bytes of the stream, assembled little-endian.
  std::uint64_t operator()();

  using result_type = std::uint64_t;
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

private:
  void refill();

  std::string prefix_;  // key || label
  HashId id_;
  std::uint32_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t pos_ = 32;
};

/// Big-endian 4-byte label for per-slot key streams.
std::string slot_label(std::uint32_t slot);

/// H(k) expanded to exactly n bits: the first n bits of D_0 || D_1 || ...
/// with D_j = BaseHash(key || uint32_be(j)). Prefix-stable across n.
BitVec hash_key(const SecretKey& k, std::size_t n_bits, HashId id = HashId::Sha256);

}  // namespace charvoc
