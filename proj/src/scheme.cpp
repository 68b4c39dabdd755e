#include "charvoc/scheme.hpp"

#include <stdexcept>

#include "charvoc/text.hpp"

namespace charvoc {

ProtectedTemplate protect(const SecretKey& k, const Embedding& e,
                          const SchemeParams& params) {
  const BitVec features = binarize(e, params);
  const BitVec digest = hash_key(k, features.size(), params.hash_id);
  return ProtectedTemplate{digest ^ features, params};
}

BitVec recover(const ProtectedTemplate& t, const SecretKey& k) {
  return t.bits ^ hash_key(k, t.bits.size(), t.params.hash_id);
}

double similarity(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("template length mismatch in similarity");
  }
  if (a.empty()) throw std::invalid_argument("similarity of empty templates");
  const std::size_t n = a.size();
  const std::size_t m = n - a.hamming(b);  // matching bits
  return static_cast<double>(m) / static_cast<double>(2 * n - m);
}

MatchResult match_templates(const BitVec& reference, const BitVec& probe,
                            double threshold) {
  const std::size_t n = reference.size();
  if (n != probe.size()) {
    throw std::invalid_argument("template length mismatch in match");
  }
  if (n == 0) throw std::invalid_argument("match of empty templates");
  const std::uint64_t m = n - reference.hamming(probe);
  const double s = static_cast<double>(m) / static_cast<double>(2 * n - m);
  return MatchResult{s, m, threshold, s >= threshold};
}

MatchResult authenticate_match(const ProtectedTemplate& stored, const SecretKey& k,
                               const Embedding& probe, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw std::invalid_argument("threshold must lie in [0, 1]");
  }
  if (probe.dim() != stored.params.dim_d) {
    throw std::invalid_argument("probe dimension does not match stored params");
  }
  return match_templates(recover(stored, k), binarize(probe, stored.params),
                         threshold);
}

BitVec cancelability_xor(const ProtectedTemplate& a, const ProtectedTemplate& b) {
  return a.bits ^ b.bits;
}

std::string serialize_scheme_params(const SchemeParams& p) {
  return "p=" + std::to_string(p.precision_p) + ",l=" + std::to_string(p.bits_l) +
         ",d=" + std::to_string(p.dim_d) + ",h=" + to_string(p.hash_id);
}

SchemeParams parse_scheme_params(std::string_view text) {
  SchemeParams p;
  bool have_p = false, have_l = false, have_d = false, have_h = false;
  for (const auto field : split(text, ',')) {
    const auto kv = split(field, '=');
    if (kv.size() != 2) throw std::invalid_argument("bad scheme params field");
    if (kv[0] == "p") {
      p.precision_p = static_cast<std::uint32_t>(parse_uint64(kv[1]));
      have_p = true;
    } else if (kv[0] == "l") {
      p.bits_l = static_cast<std::uint32_t>(parse_uint64(kv[1]));
      have_l = true;
    } else if (kv[0] == "d") {
      p.dim_d = static_cast<std::uint32_t>(parse_uint64(kv[1]));
      have_d = true;
    } else if (kv[0] == "h") {
      p.hash_id = hash_id_from_string(kv[1]);
      have_h = true;
    } else {
      throw std::invalid_argument("unknown scheme params field");
    }
  }
  if (!(have_p && have_l && have_d && have_h)) {
    throw std::invalid_argument("incomplete scheme params");
  }
  p.validate();
  return p;
}

std::string serialize_protected(const ProtectedTemplate& t) {
  return serialize_scheme_params(t.params) + ":" + t.bits.to_hex();
}

ProtectedTemplate parse_protected(std::string_view text) {
  const std::size_t pos = text.find(':');
  if (pos == std::string_view::npos) {
    throw std::invalid_argument("missing params header in protected template");
  }
  const SchemeParams params = parse_scheme_params(text.substr(0, pos));
  return ProtectedTemplate{
      BitVec::from_hex(text.substr(pos + 1), params.template_len()), params};
}

}  // namespace charvoc
