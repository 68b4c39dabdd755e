#include "charvoc/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "charvoc/rng.hpp"
#include "charvoc/text.hpp"

namespace charvoc {

namespace {

void check_embedding(const Embedding& e) {
  if (e.dim() == 0) throw std::invalid_argument("empty embedding");
  for (const double v : e.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
  }
}

}  // namespace

std::uint32_t argmax_position(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty window");
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;  // ties keep the lowest index
  }
  return best;
}

std::vector<std::uint32_t> ranks_of(std::span<const double> values) {
  std::vector<std::uint32_t> ranks(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] < values[i]) ++ranks[i];  // strictly smaller only
    }
  }
  return ranks;
}

WtaMaterial wta_material(const BaselineParams& p, std::uint32_t dim) {
  if (p.window_k == 0 || p.window_k > dim) {
    throw std::invalid_argument("window_k must lie in [1, dim]");
  }
  if (p.m_codes == 0) throw std::invalid_argument("m_codes must be >= 1");
  WtaMaterial m;
  m.windows.reserve(p.m_codes);
  for (std::uint32_t slot = 0; slot < p.m_codes; ++slot) {
    KeyStream stream(p.seed_key, p.hash_id, slot_label(slot));
    Sampler sampler(stream);
    auto perm = sampler.permutation(dim);
    perm.resize(p.window_k);  // first window_k permuted dimensions
    m.windows.push_back(std::move(perm));
  }
  return m;
}

IndexCode wta_hash_with(const WtaMaterial& m, const Embedding& e) {
  check_embedding(e);
  if (m.windows.empty()) throw std::invalid_argument("empty WTA material");
  IndexCode code;
  code.arity = static_cast<std::uint32_t>(m.windows.front().size());
  code.indices.reserve(m.windows.size());
  std::vector<double> window;
  for (const auto& dims : m.windows) {
    window.clear();
    for (const std::uint32_t d : dims) {
      if (d >= e.dim()) throw std::invalid_argument("window index out of range");
      window.push_back(e.values[d]);
    }
    code.indices.push_back(argmax_position(window));
  }
  return code;
}

IomMaterial iom_material(const BaselineParams& p, std::uint32_t dim) {
  if (p.proj_q == 0) throw std::invalid_argument("proj_q must be >= 1");
  if (p.m_codes == 0) throw std::invalid_argument("m_codes must be >= 1");
  if (dim == 0) throw std::invalid_argument("dim must be >= 1");
  IomMaterial m;
  m.proj_q = p.proj_q;
  m.rows.reserve(static_cast<std::size_t>(p.m_codes) * p.proj_q);
  for (std::uint32_t slot = 0; slot < p.m_codes; ++slot) {
    KeyStream stream(p.seed_key, p.hash_id, slot_label(slot));
    Sampler sampler(stream);
    for (std::uint32_t r = 0; r < p.proj_q; ++r) {
      std::vector<double> row(dim);
      for (auto& v : row) v = sampler.normal();
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

IndexCode iom_hash_with(const IomMaterial& m, const Embedding& e) {
  check_embedding(e);
  if (m.proj_q == 0 || m.rows.size() % m.proj_q != 0) {
    throw std::invalid_argument("malformed IoM material");
  }
  IndexCode code;
  code.arity = m.proj_q;
  const std::size_t slots = m.rows.size() / m.proj_q;
  code.indices.reserve(slots);
  std::vector<double> projected(m.proj_q);
  for (std::size_t slot = 0; slot < slots; ++slot) {
    for (std::uint32_t r = 0; r < m.proj_q; ++r) {
      const auto& row = m.rows[slot * m.proj_q + r];
      if (row.size() != e.dim()) {
        throw std::invalid_argument("projection row does not match embedding dim");
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * e.values[i];
      projected[r] = acc;
    }
    code.indices.push_back(argmax_position(projected));
  }
  return code;
}

RoeMaterial roe_material(const BaselineParams& p, std::uint32_t dim) {
  if (p.roe_dim < 2) throw std::invalid_argument("roe_dim must be >= 2");
  if (dim == 0) throw std::invalid_argument("dim must be >= 1");
  RoeMaterial m;
  m.rows.reserve(p.roe_dim);
  KeyStream stream(p.seed_key, p.hash_id, slot_label(0));
  Sampler sampler(stream);
  for (std::uint32_t r = 0; r < p.roe_dim; ++r) {
    std::vector<double> row(dim);
    for (auto& v : row) v = sampler.normal();
    m.rows.push_back(std::move(row));
  }
  return m;
}

IndexCode roe_hash_with(const RoeMaterial& m, const Embedding& e) {
  check_embedding(e);
  std::vector<double> projected;
  projected.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    if (row.size() != e.dim()) {
      throw std::invalid_argument("projection row does not match embedding dim");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * e.values[i];
    projected.push_back(acc);
  }
  IndexCode code;
  code.indices = ranks_of(projected);
  code.arity = static_cast<std::uint32_t>(m.rows.size());
  return code;
}

IndexCode wta_hash(const Embedding& e, const BaselineParams& p) {
  check_embedding(e);
  return wta_hash_with(wta_material(p, static_cast<std::uint32_t>(e.dim())), e);
}

IndexCode iom_hash(const Embedding& e, const BaselineParams& p) {
  check_embedding(e);
  return iom_hash_with(iom_material(p, static_cast<std::uint32_t>(e.dim())), e);
}

IndexCode roe_hash(const Embedding& e, const BaselineParams& p) {
  check_embedding(e);
  return roe_hash_with(roe_material(p, static_cast<std::uint32_t>(e.dim())), e);
}

IndexCode baseline_hash(BaselineScheme scheme, const Embedding& e,
                        const BaselineParams& p) {
  switch (scheme) {
    case BaselineScheme::Wta:
      return wta_hash(e, p);
    case BaselineScheme::Iom:
      return iom_hash(e, p);
    case BaselineScheme::Roe:
      return roe_hash(e, p);
  }
  throw std::invalid_argument("unknown baseline scheme");
}

double index_similarity(const IndexCode& a, const IndexCode& b) {
  if (a.indices.size() != b.indices.size() || a.arity != b.arity) {
    throw std::invalid_argument("index code shape mismatch");
  }
  if (a.indices.empty()) throw std::invalid_argument("empty index codes");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.indices.size(); ++i) {
    if (a.indices[i] == b.indices[i]) ++equal;
  }
  return static_cast<double>(equal) / static_cast<double>(a.indices.size());
}

std::string serialize_baseline_params(const BaselineParams& p) {
  return "m=" + std::to_string(p.m_codes) + ",k=" + std::to_string(p.window_k) +
         ",q=" + std::to_string(p.proj_q) + ",r=" + std::to_string(p.roe_dim) +
         ",h=" + to_string(p.hash_id);
}

BaselineParams parse_baseline_params(std::string_view text) {
  BaselineParams p;
  p.seed_key.bytes.clear();  // never persisted; caller supplies it
  for (const auto field : split(text, ',')) {
    const auto kv = split(field, '=');
    if (kv.size() != 2) throw std::invalid_argument("bad baseline params field");
    if (kv[0] == "m") {
      p.m_codes = static_cast<std::uint32_t>(parse_uint64(kv[1]));
    } else if (kv[0] == "k") {
      p.window_k = static_cast<std::uint32_t>(parse_uint64(kv[1]));
    } else if (kv[0] == "q") {
      p.proj_q = static_cast<std::uint32_t>(parse_uint64(kv[1]));
    } else if (kv[0] == "r") {
      p.roe_dim = static_cast<std::uint32_t>(parse_uint64(kv[1]));
    } else if (kv[0] == "h") {
      p.hash_id = hash_id_from_string(kv[1]);
    } else {
      throw std::invalid_argument("unknown baseline params field");
    }
  }
  return p;
}

std::string serialize_index_code(const IndexCode& c) {
  std::string out = std::to_string(c.arity) + ":";
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(c.indices[i]);
  }
  return out;
}

IndexCode parse_index_code(std::string_view text) {
  const std::size_t pos = text.find(':');
  if (pos == std::string_view::npos) {
    throw std::invalid_argument("missing arity header in index code");
  }
  IndexCode c;
  c.arity = static_cast<std::uint32_t>(parse_uint64(text.substr(0, pos)));
  const auto body = text.substr(pos + 1);
  if (!body.empty()) {
    for (const auto part : split(body, ',')) {
      const auto idx = static_cast<std::uint32_t>(parse_uint64(part));
      if (idx >= c.arity) throw std::invalid_argument("index exceeds arity");
      c.indices.push_back(idx);
    }
  }
  return c;
}

}  // namespace charvoc
