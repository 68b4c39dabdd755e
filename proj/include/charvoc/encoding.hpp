#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "charvoc/bitvec.hpp"

namespace charvoc {

/// Real-valued feature vector produced by an external speaker extractor.
struct Embedding {
  std::vector<double> values;

  Embedding() = default;
  explicit Embedding(std::vector<double> v) : values(std::move(v)) {}

  std::size_t dim() const { return values.size(); }
};

enum class HashId : std::uint8_t { Sha256 = 0, Sha3_256 = 1 };

std::string to_string(HashId id);
HashId hash_id_from_string(std::string_view name);

/// Everything needed to re-derive a template bit-for-bit: decimal scaling
/// exponent p, magnitude bit width l, feature dimension d and the hash used
/// for key digests. Template length is d * (l + 1): one sign bit plus l
/// graycode magnitude bits per feature.
struct SchemeParams {
  std::uint32_t precision_p = 4;
  std::uint32_t bits_l = 15;
  std::uint32_t dim_d = 1024;
  HashId hash_id = HashId::Sha256;

  std::size_t template_len() const {
    return static_cast<std::size_t>(dim_d) * (bits_l + 1);
  }
  void validate() const;  // throws std::invalid_argument
};

/// round(x * 10^p), half away from zero. Deliberately non-injective:
/// roundoff(3.6, 0) == roundoff(3.9, 0) == 4.
/// Throws std::domain_error for non-finite x and std::range_error when the
/// scaled value does not fit a 64-bit integer.
std::int64_t roundoff(double x, std::uint32_t p);

/// Reflected binary graycode of m as an l-bit value (m XOR m>>1).
/// Requires m < 2^l; throws std::range_error otherwise. l in [1, 63].
std::uint64_t gray_encode(std::uint64_t m, std::uint32_t l);

/// Inverse of gray_encode (prefix-XOR scan); width-agnostic.
std::uint64_t gray_decode(std::uint64_t g);

/// Same, from an MSB-first bit string such as "111".
std::uint64_t gray_decode(std::string_view bits);

/// Saturate a magnitude to the largest l-bit value.
std::uint64_t clamp_magnitude(std::uint64_t m, std::uint32_t l);

/// Render the low `width` bits of value MSB-first ("1010").
std::string format_bits(std::uint64_t value, std::uint32_t width);

/// Quantize, sign-encode and graycode every feature. Each feature yields an
/// (l+1)-bit block: sign bit first (1 when the rounded value is >= 0), then
/// the l magnitude bits MSB first. Blocks are concatenated in feature order.
BitVec binarize(const Embedding& e, const SchemeParams& params);

using BinaryTemplate = BitVec;

}  // namespace charvoc
