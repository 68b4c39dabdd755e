#include "charvoc/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace charvoc {

std::string to_string(HashId id) {
  switch (id) {
    case HashId::Sha256:
      return "sha256";
    case HashId::Sha3_256:
      return "sha3-256";
  }
  throw std::invalid_argument("unknown hash id");
}

HashId hash_id_from_string(std::string_view name) {
  if (name == "sha256") return HashId::Sha256;
  if (name == "sha3-256") return HashId::Sha3_256;
  throw std::invalid_argument("unknown hash id: '" + std::string(name) + "'");
}

void SchemeParams::validate() const {
  if (dim_d == 0) throw std::invalid_argument("dim_d must be >= 1");
  if (bits_l == 0 || bits_l > 62) {
    throw std::invalid_argument("bits_l must lie in [1, 62]");
  }
  to_string(hash_id);  // rejects stray enum values
}

std::int64_t roundoff(double x, std::uint32_t p) {
  if (!std::isfinite(x)) throw std::domain_error("roundoff of non-finite value");
  // 10^p as a double is exact up to p = 22; larger p overflows the check below
  // long before the power matters.
  const double scaled = x * std::pow(10.0, static_cast<double>(p));
  if (!std::isfinite(scaled) || std::abs(scaled) >= 9.223372036854775e18) {
    throw std::range_error("scaled value out of 64-bit range");
  }
  // Half away from zero, symmetric in sign: r(-x) == -r(x).
  return std::llround(scaled);
}

std::uint64_t gray_encode(std::uint64_t m, std::uint32_t l) {
  if (l == 0 || l > 63) throw std::invalid_argument("gray width must lie in [1, 63]");
  if (m >> l) throw std::range_error("magnitude does not fit the gray width");
  return m ^ (m >> 1);
}

std::uint64_t gray_decode(std::uint64_t g) {
  std::uint64_t m = g;
  for (std::uint32_t shift = 1; shift < 64; shift <<= 1) m ^= m >> shift;
  return m;
}

std::uint64_t gray_decode(std::string_view bits) {
  if (bits.empty()) throw std::invalid_argument("empty bit string");
  if (bits.size() > 64) throw std::invalid_argument("bit string wider than 64");
  std::uint64_t g = 0;
  for (const char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit character");
    g = (g << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return gray_decode(g);
}

std::uint64_t clamp_magnitude(std::uint64_t m, std::uint32_t l) {
  if (l == 0 || l > 63) throw std::invalid_argument("gray width must lie in [1, 63]");
  const std::uint64_t cap = (std::uint64_t{1} << l) - 1;
  return m < cap ? m : cap;
}

std::string format_bits(std::uint64_t value, std::uint32_t width) {
  std::string out(width, '0');
  for (std::uint32_t i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1) out[i] = '1';
  }
  return out;
}

BitVec binarize(const Embedding& e, const SchemeParams& params) {
  params.validate();
  if (e.dim() != params.dim_d) {
    throw std::invalid_argument("embedding dimension does not match params");
  }
  const std::uint32_t l = params.bits_l;
  BitVec out(params.template_len());
  std::size_t pos = 0;
  for (const double f : e.values) {
    const std::int64_t r = roundoff(f, params.precision_p);
    const bool nonnegative = r >= 0;
    // |r| via unsigned negation; r == INT64_MIN cannot occur (roundoff caps
    // the magnitude below 2^63).
    const std::uint64_t mag =
        nonnegative ? static_cast<std::uint64_t>(r)
                    : 0 - static_cast<std::uint64_t>(r);
    const std::uint64_t code = gray_encode(clamp_magnitude(mag, l), l);
    out.set(pos++, nonnegative);
    for (std::uint32_t j = 0; j < l; ++j) {
      out.set(pos++, (code >> (l - 1 - j)) & 1);  // MSB first
    }
  }
  return out;
}

}  // namespace charvoc
