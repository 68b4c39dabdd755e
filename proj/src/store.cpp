#include "charvoc/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "charvoc/text.hpp"

namespace charvoc {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ChaRVoC:
      return "charvoc";
    case Scheme::Wta:
      return "wta";
    case Scheme::Iom:
      return "iom";
    case Scheme::Roe:
      return "roe";
  }
  throw std::invalid_argument("unknown scheme");
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "charvoc") return Scheme::ChaRVoC;
  if (name == "wta") return Scheme::Wta;
  if (name == "iom") return Scheme::Iom;
  if (name == "roe") return Scheme::Roe;
  throw std::invalid_argument("unknown scheme: '" + std::string(name) + "'");
}

SchemeParams ProtectedRecord::scheme_params() const {
  if (scheme != Scheme::ChaRVoC) {
    throw std::logic_error("scheme_params on a non-charvoc record");
  }
  return parse_scheme_params(params_text);
}

ProtectedTemplate ProtectedRecord::protected_template() const {
  const SchemeParams p = scheme_params();
  return ProtectedTemplate{BitVec::from_hex(template_hex, p.template_len()), p};
}

BaselineParams ProtectedRecord::baseline_params() const {
  if (scheme == Scheme::ChaRVoC) {
    throw std::logic_error("baseline_params on a charvoc record");
  }
  return parse_baseline_params(params_text);
}

IndexCode ProtectedRecord::index_code() const {
  if (scheme == Scheme::ChaRVoC) {
    throw std::logic_error("index_code on a charvoc record");
  }
  return parse_index_code(hex_dearmor(template_hex));
}

namespace {

void check_user_id(const std::string& user_id) {
  if (user_id.empty()) throw std::invalid_argument("empty user id");
  for (const char c : user_id) {
    if (c == '|' || c == '\n' || c == '\r') {
      throw std::invalid_argument("user id may not contain '|' or newlines");
    }
  }
}

}  // namespace

ProtectedRecord make_charvoc_record(std::string user_id, const ProtectedTemplate& t,
                                    double threshold, std::int64_t created_at) {
  check_user_id(user_id);
  t.params.validate();
  if (t.bits.size() != t.params.template_len()) {
    throw std::invalid_argument("template length does not match params");
  }
  ProtectedRecord rec;
  rec.user_id = std::move(user_id);
  rec.scheme = Scheme::ChaRVoC;
  rec.params_text = serialize_scheme_params(t.params);
  rec.template_hex = t.bits.to_hex();
  rec.threshold = threshold;
  rec.created_at = created_at;
  return rec;
}

ProtectedRecord make_baseline_record(std::string user_id, Scheme scheme,
                                     const IndexCode& code, const BaselineParams& p,
                                     double threshold, std::int64_t created_at) {
  check_user_id(user_id);
  if (scheme == Scheme::ChaRVoC) {
    throw std::invalid_argument("baseline record cannot use the charvoc scheme");
  }
  ProtectedRecord rec;
  rec.user_id = std::move(user_id);
  rec.scheme = scheme;
  rec.params_text = serialize_baseline_params(p);
  rec.template_hex = hex_armor(serialize_index_code(code));
  rec.threshold = threshold;
  rec.created_at = created_at;
  return rec;
}

std::string format_record_line(const ProtectedRecord& rec) {
  return "v1|" + rec.user_id + "|" + to_string(rec.scheme) + "|" +
         std::to_string(rec.generation) + "|" + (rec.revoked ? "revoked" : "active") +
         "|" + hex_armor(rec.params_text) + "|" + rec.template_hex + "|" +
         format_double(rec.threshold) + "|" + std::to_string(rec.created_at);
}

ProtectedRecord parse_record_line(std::string_view line) {
  const auto fields = split(line, '|');
  if (fields.size() != 9 || fields[0] != "v1") {
    throw StoreError("malformed record line");
  }
  ProtectedRecord rec;
  rec.user_id = std::string(fields[1]);
  check_user_id(rec.user_id);
  rec.scheme = scheme_from_string(fields[2]);
  rec.generation = parse_uint64(fields[3]);
  if (fields[4] == "active") {
    rec.revoked = false;
  } else if (fields[4] == "revoked") {
    rec.revoked = true;
  } else {
    throw StoreError("unknown record status");
  }
  rec.params_text = hex_dearmor(fields[5]);
  rec.template_hex = std::string(fields[6]);
  rec.threshold = fields[7].empty() ? 0.0 : parse_double(fields[7]);
  rec.created_at = parse_int64(fields[8]);
  return rec;
}

TemplateStore::TemplateStore(std::filesystem::path log_path)
    : log_path_(std::move(log_path)) {
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_);
    if (!in) throw StoreError("cannot open record log: " + log_path_.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) replay_line(line);
    }
  }
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (log_fd_ < 0) {
    throw StoreError("cannot open record log for append: " +
                     std::string(std::strerror(errno)));
  }
}

TemplateStore::~TemplateStore() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

void TemplateStore::replay_line(std::string_view line) {
  ProtectedRecord rec = parse_record_line(line);
  if (rec.revoked) {
    apply_revoke(rec.user_id, rec.scheme);
  } else {
    apply_enroll(std::move(rec));
  }
}

void TemplateStore::apply_enroll(ProtectedRecord rec) {
  const auto key = std::make_pair(rec.user_id, static_cast<std::uint8_t>(rec.scheme));
  if (const auto it = active_.find(key); it != active_.end()) {
    active_.erase(it);  // superseded record stays in records_
  }
  auto& gen = max_generation_[rec.user_id];
  if (rec.generation > gen) gen = rec.generation;
  records_.push_back(std::move(rec));
  active_[key] = records_.size() - 1;
}

void TemplateStore::apply_revoke(const std::string& user_id, Scheme scheme) {
  const auto key = std::make_pair(user_id, static_cast<std::uint8_t>(scheme));
  if (const auto it = active_.find(key); it != active_.end()) {
    records_[it->second].revoked = true;
    active_.erase(it);
  }
}

void TemplateStore::append_line(const std::string& line) {
  if (log_fd_ < 0) return;  // in-memory store
  const std::string payload = line + "\n";
  if (::flock(log_fd_, LOCK_EX) != 0) {
    throw StoreError("cannot lock record log");
  }
  const ssize_t written = ::write(log_fd_, payload.data(), payload.size());
  ::flock(log_fd_, LOCK_UN);
  if (written != static_cast<ssize_t>(payload.size())) {
    throw StoreError("short write to record log");
  }
}

std::uint64_t TemplateStore::enroll(ProtectedRecord rec) {
  check_user_id(rec.user_id);
  if (rec.scheme == Scheme::ChaRVoC) {
    rec.protected_template();  // validates params + hex up front
  } else {
    rec.index_code();
  }
  std::unique_lock lock(mu_);
  rec.generation = max_generation_[rec.user_id] + 1;
  rec.revoked = false;
  append_line(format_record_line(rec));
  const std::uint64_t gen = rec.generation;
  apply_enroll(std::move(rec));
  return gen;
}

bool TemplateStore::revoke(const std::string& user_id, Scheme scheme,
                           std::int64_t now) {
  std::unique_lock lock(mu_);
  const auto key = std::make_pair(user_id, static_cast<std::uint8_t>(scheme));
  const auto it = active_.find(key);
  if (it == active_.end()) return false;
  ProtectedRecord tombstone;
  tombstone.user_id = user_id;
  tombstone.scheme = scheme;
  tombstone.generation = records_[it->second].generation;
  tombstone.revoked = true;
  tombstone.threshold = 0.0;
  tombstone.created_at = now;
  append_line(format_record_line(tombstone));
  apply_revoke(user_id, scheme);
  return true;
}

std::optional<ProtectedRecord> TemplateStore::fetch_active(
    const std::string& user_id, std::optional<Scheme> scheme) const {
  std::shared_lock lock(mu_);
  if (scheme) {
    const auto key = std::make_pair(user_id, static_cast<std::uint8_t>(*scheme));
    const auto it = active_.find(key);
    if (it == active_.end()) return std::nullopt;
    return records_[it->second];
  }
  const ProtectedRecord* best = nullptr;
  for (const auto& [key, idx] : active_) {
    if (key.first != user_id) continue;
    const auto& rec = records_[idx];
    if (!best || rec.generation > best->generation) best = &rec;
  }
  if (!best) return std::nullopt;
  return *best;
}

std::vector<ProtectedRecord> TemplateStore::records_for(
    const std::string& user_id) const {
  std::shared_lock lock(mu_);
  std::vector<ProtectedRecord> out;
  for (const auto& rec : records_) {
    if (rec.user_id == user_id) out.push_back(rec);
  }
  return out;
}

std::size_t TemplateStore::record_count() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

}  // namespace charvoc
