#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace charvoc {

/// Packed bit string. Bit i lives in byte i/8 at position i%8, so the byte
/// image is the same on every platform and hex round-trips are exact.
/// Unused bits in the last byte are kept at zero.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

  /// Parse an MSB-on-the-left ASCII string such as "0110".
  static BitVec from_bit_string(std::string_view ascii);

  /// Parse lowercase/uppercase hex covering ceil(nbits/8) bytes.
  /// Rejects nonzero padding bits past nbits.
  static BitVec from_hex(std::string_view hex, std::size_t nbits);

  /// Adopt a byte image; padding bits past nbits are cleared.
  static BitVec from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool v);
  void append(bool v);

  /// Number of differing bit positions. Lengths must match.
  std::size_t hamming(const BitVec& other) const;
  std::size_t popcount() const;

  BitVec operator^(const BitVec& other) const;
  bool operator==(const BitVec&) const = default;

  std::string to_hex() const;
  std::string to_bit_string() const;

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
  std::size_t nbits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace charvoc
