#include "charvoc/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace charvoc {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

BitVec BitVec::from_bit_string(std::string_view ascii) {
  BitVec v(ascii.size());
  for (std::size_t i = 0; i < ascii.size(); ++i) {
    if (ascii[i] == '1') {
      v.set(i, true);
    } else if (ascii[i] != '0') {
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    }
  }
  return v;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t nbits) {
  const std::size_t nbytes = (nbits + 7) / 8;
  if (hex.size() != nbytes * 2) {
    throw std::invalid_argument("hex length does not match bit count");
  }
  BitVec v(nbits);
  for (std::size_t i = 0; i < nbytes; ++i) {
    const int hi = hex_nibble(hex[2 * i]);
    const int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit");
    v.bytes_[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  if (nbits % 8 != 0) {
    const std::uint8_t mask = static_cast<std::uint8_t>(0xFF << (nbits % 8));
    if (v.bytes_.back() & mask) {
      throw std::invalid_argument("nonzero padding bits past the template length");
    }
  }
  return v;
}

BitVec BitVec::from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits) {
  if (bytes.size() != (nbits + 7) / 8) {
    throw std::invalid_argument("byte count does not match bit count");
  }
  BitVec v(nbits);
  v.bytes_ = std::move(bytes);
  if (nbits % 8 != 0) {
    v.bytes_.back() &= static_cast<std::uint8_t>(0xFF >> (8 - nbits % 8));
  }
  return v;
}

bool BitVec::get(std::size_t i) const {
  if (i >= nbits_) throw std::out_of_range("bit index out of range");
  return (bytes_[i >> 3] >> (i & 7)) & 1;
}

void BitVec::set(std::size_t i, bool v) {
  if (i >= nbits_) throw std::out_of_range("bit index out of range");
  const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
  if (v) {
    bytes_[i >> 3] |= mask;
  } else {
    bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
}

void BitVec::append(bool v) {
  if (nbits_ % 8 == 0) bytes_.push_back(0);
  ++nbits_;
  if (v) set(nbits_ - 1, true);
}

std::size_t BitVec::hamming(const BitVec& other) const {
  if (nbits_ != other.nbits_) {
    throw std::invalid_argument("length mismatch in hamming distance");
  }
  std::size_t acc = 0;
  for (std::size_t i = 0; i < bytes_.size(); ++i) {
    acc += std::popcount(static_cast<unsigned>(bytes_[i] ^ other.bytes_[i]));
  }
  return acc;
}

std::size_t BitVec::popcount() const {
  std::size_t acc = 0;
  for (const std::uint8_t b : bytes_) acc += std::popcount(static_cast<unsigned>(b));
  return acc;
}

BitVec BitVec::operator^(const BitVec& other) const {
  if (nbits_ != other.nbits_) {
    throw std::invalid_argument("length mismatch in xor");
  }
  BitVec out(nbits_);
  for (std::size_t i = 0; i < bytes_.size(); ++i) {
    out.bytes_[i] = bytes_[i] ^ other.bytes_[i];
  }
  return out;
}

std::string BitVec::to_hex() const {
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (const std::uint8_t b : bytes_) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xF]);
  }
  return out;
}

std::string BitVec::to_bit_string() const {
  std::string out;
  out.reserve(nbits_);
  for (std::size_t i = 0; i < nbits_; ++i) out.push_back(get(i) ? '1' : '0');
  return out;
}

}  // namespace charvoc
