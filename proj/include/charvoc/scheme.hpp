#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "charvoc/encoding.hpp"
#include "charvoc/keyhash.hpp"

namespace charvoc {

/// The stored enrollment artifact: key digest XOR binarized features.
/// Safe to persist in plaintext; useless without the key.
struct ProtectedTemplate {
  BitVec bits;
  SchemeParams params;
};

struct MatchResult {
  double similarity = 0.0;
  std::uint64_t matching_bits = 0;
  double threshold = 0.0;
  bool accepted = false;
};

/// f(k, v): hash_key(k, n) XOR binarize(v, params).
ProtectedTemplate protect(const SecretKey& k, const Embedding& e,
                          const SchemeParams& params);

/// XOR the key digest back out. With the enrollment key this yields the
/// enrollment-time binarization; with any other key, pseudorandom bits.
/// Deliberately never errors on a wrong key, so there is no key oracle.
BitVec recover(const ProtectedTemplate& t, const SecretKey& k);

/// Matching-bit ratio S = m / (2n - m): 1 for identical templates, 0 for
/// complementary ones. Lengths must match and be nonzero.
double similarity(const BitVec& a, const BitVec& b);

/// similarity plus the threshold decision, as a MatchResult.
MatchResult match_templates(const BitVec& reference, const BitVec& probe,
                            double threshold);

/// Recover with the presented key and match against the probe's
/// binarization. threshold must lie in [0, 1].
MatchResult authenticate_match(const ProtectedTemplate& stored, const SecretKey& k,
                               const Embedding& probe, double threshold);

/// XOR of two protected templates. Depending on whether keys and
/// binarizations coincide this equals 0, T1^T2, H1^H2 or the XOR of both;
/// the revocability tests pin down all four cases.
BitVec cancelability_xor(const ProtectedTemplate& a, const ProtectedTemplate& b);

// Canonical text forms ("p=4,l=15,d=1024,h=sha256" and params + ":" + hex).
std::string serialize_scheme_params(const SchemeParams& p);
SchemeParams parse_scheme_params(std::string_view text);
std::string serialize_protected(const ProtectedTemplate& t);
ProtectedTemplate parse_protected(std::string_view text);

}  // namespace charvoc
