#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "charvoc/encoding.hpp"
#include "charvoc/keyhash.hpp"

namespace charvoc {

enum class BaselineScheme : std::uint8_t { Wta, Iom, Roe };

/// Hyperparameters for the key-seeded baseline transforms. All randomness
/// (window permutations, projection matrices) derives from seed_key, so the
/// codes are reproducible and revocable by key change.
struct BaselineParams {
  SecretKey seed_key;
  std::uint32_t m_codes = 300;   // output slots (WTA / IoM)
  std::uint32_t window_k = 16;   // WTA window size
  std::uint32_t proj_q = 16;     // IoM projection rows per slot
  std::uint32_t roe_dim = 64;    // RoE projection dimension
  HashId hash_id = HashId::Sha256;
};

struct IndexCode {
  std::vector<std::uint32_t> indices;
  std::uint32_t arity = 0;  // every index is < arity
};

// Testable internals. Ties resolve to the lowest index; ranks count strictly
// smaller elements only.
std::uint32_t argmax_position(std::span<const double> values);
std::vector<std::uint32_t> ranks_of(std::span<const double> values);

// Per-key derived material, reusable across many embeddings of one key.
struct WtaMaterial {
  std::vector<std::vector<std::uint32_t>> windows;  // m_codes x window_k dimension ids
};
struct IomMaterial {
  std::vector<std::vector<double>> rows;  // m_codes*proj_q rows of length dim
  std::uint32_t proj_q = 0;
};
struct RoeMaterial {
  std::vector<std::vector<double>> rows;  // roe_dim rows of length dim
};

WtaMaterial wta_material(const BaselineParams& p, std::uint32_t dim);
IomMaterial iom_material(const BaselineParams& p, std::uint32_t dim);
RoeMaterial roe_material(const BaselineParams& p, std::uint32_t dim);

IndexCode wta_hash_with(const WtaMaterial& m, const Embedding& e);
IndexCode iom_hash_with(const IomMaterial& m, const Embedding& e);
IndexCode roe_hash_with(const RoeMaterial& m, const Embedding& e);

/// Winner-take-all: per slot, argmax position within a key-seeded window of
/// window_k permuted dimensions.
IndexCode wta_hash(const Embedding& e, const BaselineParams& p);

/// Index-of-max: per slot, argmax row of a key-seeded proj_q x dim Gaussian
/// projection. Scale-invariant for positive scalings of e.
IndexCode iom_hash(const Embedding& e, const BaselineParams& p);

/// Ranking-of-element: project once to roe_dim values, emit each element's
/// count of strictly smaller elements.
IndexCode roe_hash(const Embedding& e, const BaselineParams& p);

IndexCode baseline_hash(BaselineScheme scheme, const Embedding& e,
                        const BaselineParams& p);

/// Fraction of slots with equal indices; shapes must match.
double index_similarity(const IndexCode& a, const IndexCode& b);

// Canonical text forms for persistence ("m=300,k=16,q=16,r=64,h=sha256";
// seed_key is deliberately never serialized).
std::string serialize_baseline_params(const BaselineParams& p);
BaselineParams parse_baseline_params(std::string_view text);
std::string serialize_index_code(const IndexCode& c);  // "arity:i0,i1,..."
IndexCode parse_index_code(std::string_view text);

}  // namespace charvoc
