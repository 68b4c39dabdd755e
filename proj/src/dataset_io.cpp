#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "charvoc/eval.hpp"
#include "charvoc/text.hpp"

namespace charvoc {

void SpeakerDataset::validate() const {
  if (speaker_ids.size() != utterances.size()) {
    throw std::invalid_argument("speaker id / utterance list size mismatch");
  }
  if (speaker_ids.empty()) throw std::invalid_argument("empty dataset");
  for (std::size_t s = 0; s < utterances.size(); ++s) {
    if (utterances[s].size() < 2) {
      throw std::invalid_argument("speaker '" + speaker_ids[s] +
                                  "' has fewer than 2 embeddings");
    }
    for (const auto& e : utterances[s]) {
      if (e.dim() != dim) {
        throw std::invalid_argument("inconsistent embedding dimension");
      }
      for (const double v : e.values) {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("non-finite embedding value");
        }
      }
    }
  }
}

namespace {

// One vector per line: optional "<speaker_id>:" token, then space-separated
// decimal reals.
std::pair<std::string, Embedding> parse_embedding_line(std::string_view line,
                                                       std::size_t lineno) {
  std::string speaker;
  const std::size_t colon = line.find(':');
  const std::size_t first_space = line.find(' ');
  if (colon != std::string_view::npos &&
      (first_space == std::string_view::npos || colon < first_space)) {
    speaker = std::string(line.substr(0, colon));
    line.remove_prefix(colon + 1);
  }
  Embedding e;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p != end) {
    if (*p == ' ' || *p == '\t') {
      ++p;
      continue;
    }
    double v{};
    const auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) {
      throw std::invalid_argument("bad embedding value on line " +
                                  std::to_string(lineno));
    }
    e.values.push_back(v);
    p = next;
  }
  return {std::move(speaker), std::move(e)};
}

}  // namespace

std::vector<std::pair<std::string, Embedding>> load_embeddings(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path.string());
  std::vector<std::pair<std::string, Embedding>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto [speaker, e] = parse_embedding_line(line, lineno);
    if (e.dim() == 0) continue;
    out.emplace_back(std::move(speaker), std::move(e));
  }
  return out;
}

SpeakerDataset load_dataset(const std::filesystem::path& path) {
  SpeakerDataset ds;
  std::map<std::string, std::size_t> index;
  std::size_t anon = 0;
  for (auto& [speaker, e] : load_embeddings(path)) {
    std::string id = speaker.empty() ? "_anon" + std::to_string(anon++) : speaker;
    const auto [it, inserted] = index.try_emplace(id, ds.speaker_ids.size());
    if (inserted) {
      ds.speaker_ids.push_back(id);
      ds.utterances.emplace_back();
    }
    ds.utterances[it->second].push_back(std::move(e));
  }
  if (ds.speaker_ids.empty()) {
    throw std::invalid_argument("no embeddings in " + path.string());
  }
  ds.dim = static_cast<std::uint32_t>(ds.utterances.front().front().dim());
  ds.provenance = "ingested(" + path.string() + ")";
  ds.validate();
  return ds;
}

void save_dataset(const SpeakerDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path.string());
  for (std::size_t s = 0; s < ds.speaker_ids.size(); ++s) {
    for (const auto& e : ds.utterances[s]) {
      out << ds.speaker_ids[s] << ":";
      for (const double v : e.values) out << ' ' << format_double(v);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace charvoc
