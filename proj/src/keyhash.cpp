#include "charvoc/keyhash.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace charvoc {

namespace {

const EVP_MD* evp_for(HashId id) {
  switch (id) {
    case HashId::Sha256:
      return EVP_sha256();
    case HashId::Sha3_256:
      return EVP_sha3_256();
  }
  throw std::invalid_argument("unknown hash id");
}

}  // namespace

std::array<std::uint8_t, 32> digest256(HashId id, std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int out_len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &out_len, evp_for(id),
                 nullptr) != 1 ||
      out_len != out.size()) {
    throw std::runtime_error("digest computation failed");
  }
  return out;
}

std::string slot_label(std::uint32_t slot) {
  std::string label(4, '\0');
  label[0] = static_cast<char>((slot >> 24) & 0xFF);
  label[1] = static_cast<char>((slot >> 16) & 0xFF);
  label[2] = static_cast<char>((slot >> 8) & 0xFF);
  label[3] = static_cast<char>(slot & 0xFF);
  return label;
}

KeyStream::KeyStream(const SecretKey& key, HashId id, std::string label)
    : prefix_(key.bytes + label), id_(id) {
  if (key.bytes.empty()) throw std::invalid_argument("secret key must be non-empty");
  evp_for(id_);  // validate up front
}

void KeyStream::refill() {
  // Block j = BaseHash(key || label || uint32_be(j)).
  std::string msg = prefix_ + slot_label(counter_);
  ++counter_;
  block_ = digest256(id_, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(msg.data()),
                              msg.size()));
  pos_ = 0;
}

std::uint8_t KeyStream::next_byte() {
  if (pos_ >= block_.size()) refill();
  return block_[pos_++];
}

std::uint64_t KeyStream::operator()() {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(next_byte()) << (8 * i);
  }
  return v;
}

BitVec hash_key(const SecretKey& k, std::size_t n_bits, HashId id) {
  if (n_bits == 0) throw std::invalid_argument("digest length must be >= 1 bit");
  KeyStream stream(k, id);
  std::vector<std::uint8_t> raw((n_bits + 7) / 8);
  for (auto& b : raw) b = stream.next_byte();
  return BitVec::from_bytes(std::move(raw), n_bits);
}

}  // namespace charvoc
