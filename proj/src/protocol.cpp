#include "charvoc/protocol.hpp"

#include <fcntl.h>
#include <openssl/rand.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>

#include "charvoc/rng.hpp"
#include "charvoc/text.hpp"

namespace charvoc {

std::string to_string(AuthOutcome o) {
  switch (o) {
    case AuthOutcome::Accepted:
      return "Accepted";
    case AuthOutcome::RejectedTranscript:
      return "RejectedTranscript";
    case AuthOutcome::RejectedExpired:
      return "RejectedExpired";
    case AuthOutcome::RejectedReplayed:
      return "RejectedReplayed";
    case AuthOutcome::RejectedMatch:
      return "RejectedMatch";
    case AuthOutcome::RejectedUnknownUser:
      return "RejectedUnknownUser";
  }
  throw std::invalid_argument("unknown outcome");
}

namespace {

const char* digit_word(std::string_view w) {
  static constexpr std::pair<std::string_view, const char*> kWords[] = {
      {"zero", "0"}, {"one", "1"}, {"two", "2"},   {"three", "3"}, {"four", "4"},
      {"five", "5"}, {"six", "6"}, {"seven", "7"}, {"eight", "8"}, {"nine", "9"},
  };
  for (const auto& [word, digit] : kWords) {
    if (w == word) return digit;
  }
  return nullptr;
}

int fd_for_append(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) {
    throw StoreError("cannot open log for append: " + path.string() + ": " +
                     std::strerror(errno));
  }
  return fd;
}

void append_locked(int fd, const std::string& line) {
  if (fd < 0) return;
  const std::string payload = line + "\n";
  if (::flock(fd, LOCK_EX) != 0) throw StoreError("cannot lock session log");
  const ssize_t written = ::write(fd, payload.data(), payload.size());
  ::flock(fd, LOCK_UN);
  if (written != static_cast<ssize_t>(payload.size())) {
    throw StoreError("short write to session log");
  }
}

}  // namespace

std::string normalize_transcript(std::string_view transcript) {
  std::string out;
  std::string word;
  const auto flush_word = [&] {
    if (word.empty()) return;
    if (const char* d = digit_word(word)) {
      out += d;
    } else {
      out.push_back('?');  // unknown word: can never match a digit string
    }
    word.clear();
  };
  for (const char ch : transcript) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isdigit(c)) {
      flush_word();
      out.push_back(ch);
    } else if (std::isalpha(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush_word();  // whitespace / punctuation only separates tokens
    }
  }
  flush_word();
  return out;
}

bool verify_transcript(const Challenge& c, std::string_view transcript) {
  return normalize_transcript(transcript) == c.digits;
}

ChallengeService::ChallengeService(TemplateStore& store, Config cfg)
    : store_(store), cfg_(std::move(cfg)), prng_(cfg_.seed) {
  if (cfg_.digit_len < 4) {
    throw std::invalid_argument("challenge length must be >= 4 digits");
  }
  if (cfg_.ttl_ms <= 0) throw std::invalid_argument("ttl must be positive");
  if (cfg_.session_log) {
    load_session_log();
    session_fd_ = fd_for_append(*cfg_.session_log);
  }
  if (cfg_.audit_log) audit_fd_ = fd_for_append(*cfg_.audit_log);
}

ChallengeService::~ChallengeService() {
  if (session_fd_ >= 0) ::close(session_fd_);
  if (audit_fd_ >= 0) ::close(audit_fd_);
}

void ChallengeService::load_session_log() {
  if (!std::filesystem::exists(*cfg_.session_log)) return;
  std::ifstream in(*cfg_.session_log);
  if (!in) throw StoreError("cannot open session log");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, '|');
    if (f.size() == 6 && f[0] == "issue") {
      Challenge c;
      c.session_id = std::string(f[1]);
      c.user_id = std::string(f[2]);
      c.digits = std::string(f[3]);
      c.issued_at_ms = parse_int64(f[4]);
      c.ttl_ms = parse_int64(f[5]);
      sessions_[c.session_id] = std::move(c);
    } else if (f.size() == 3 && f[0] == "consume") {
      if (const auto it = sessions_.find(std::string(f[1])); it != sessions_.end()) {
        it->second.consumed = true;
      }
    } else if (f.size() == 3 && f[0] == "expire") {
      if (const auto it = sessions_.find(std::string(f[1])); it != sessions_.end()) {
        it->second.expired_dead = true;
      }
    } else {
      throw StoreError("malformed session log line");
    }
  }
}

std::uint64_t ChallengeService::next_u64() {
  if (cfg_.deterministic) return prng_();
  std::array<std::uint8_t, 8> buf;
  if (RAND_bytes(buf.data(), buf.size()) != 1) {
    throw std::runtime_error("secure random source unavailable");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

std::string ChallengeService::fresh_session_id() {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  id.reserve(32);
  for (int chunk = 0; chunk < 2; ++chunk) {
    std::uint64_t v = next_u64();
    for (int i = 0; i < 16; ++i) {
      id.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return id;
}

std::string ChallengeService::fresh_digits() {
  // Rejection sampling keeps each digit exactly uniform.
  std::string digits;
  digits.reserve(cfg_.digit_len);
  for (std::uint32_t i = 0; i < cfg_.digit_len; ++i) {
    constexpr std::uint64_t kLimit = (~std::uint64_t{0} / 10) * 10;
    std::uint64_t v = next_u64();
    while (v >= kLimit) v = next_u64();
    digits.push_back(static_cast<char>('0' + (v % 10)));
  }
  return digits;
}

Challenge ChallengeService::issue(const std::string& user_id, std::int64_t now_ms) {
  if (!store_.fetch_active(user_id)) {
    throw UnknownUserError("no active enrollment for user '" + user_id + "'");
  }
  std::lock_guard lock(mu_);
  Challenge c;
  do {
    c.session_id = fresh_session_id();
  } while (sessions_.contains(c.session_id));
  c.user_id = user_id;
  c.digits = fresh_digits();
  c.issued_at_ms = now_ms;
  c.ttl_ms = cfg_.ttl_ms;
  persist_event("issue|" + c.session_id + "|" + c.user_id + "|" + c.digits + "|" +
                std::to_string(c.issued_at_ms) + "|" + std::to_string(c.ttl_ms));
  sessions_[c.session_id] = c;
  return c;
}

void ChallengeService::persist_event(const std::string& line) {
  append_locked(session_fd_, line);
}

void ChallengeService::audit(std::int64_t now_ms, const std::string& user,
                             const std::string& session, AuthOutcome outcome) {
  const std::string line = std::to_string(now_ms) + "|" + user + "|" + session +
                           "|" + to_string(outcome);
  append_locked(audit_fd_, line);
  if (audit_sink_) audit_sink_(line);
}

AuthDecision ChallengeService::finish(std::int64_t now_ms, const std::string& user,
                                      const std::string& session, AuthDecision d) {
  audit(now_ms, user, session, d.outcome);
  return d;
}

MatchResult ChallengeService::match_record(const ProtectedRecord& rec,
                                           const SecretKey& key,
                                           const Embedding& probe) const {
  if (rec.scheme == Scheme::ChaRVoC) {
    return authenticate_match(rec.protected_template(), key, probe, rec.threshold);
  }
  BaselineParams params = rec.baseline_params();
  params.seed_key = key;
  const BaselineScheme scheme = rec.scheme == Scheme::Wta   ? BaselineScheme::Wta
                                : rec.scheme == Scheme::Iom ? BaselineScheme::Iom
                                                            : BaselineScheme::Roe;
  const IndexCode stored = rec.index_code();
  const IndexCode probe_code = baseline_hash(scheme, probe, params);
  const double s = index_similarity(stored, probe_code);
  std::uint64_t equal = 0;
  for (std::size_t i = 0; i < stored.indices.size(); ++i) {
    if (stored.indices[i] == probe_code.indices[i]) ++equal;
  }
  return MatchResult{s, equal, rec.threshold, s >= rec.threshold};
}

AuthDecision ChallengeService::authenticate(const std::string& user_id,
                                            const std::string& session_id,
                                            std::string_view transcript,
                                            const SecretKey& key,
                                            const Embedding& probe,
                                            std::int64_t now_ms) {
  Challenge snapshot;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end() || it->second.user_id != user_id) {
      // Unknown or foreign session: indistinguishable from a replay.
      return finish(now_ms, user_id, session_id,
                    AuthDecision{false, std::nullopt, AuthOutcome::RejectedReplayed});
    }
    Challenge& c = it->second;
    if (c.expired_dead) {
      return finish(now_ms, user_id, session_id,
                    AuthDecision{false, std::nullopt, AuthOutcome::RejectedExpired});
    }
    if (c.consumed) {
      return finish(now_ms, user_id, session_id,
                    AuthDecision{false, std::nullopt, AuthOutcome::RejectedReplayed});
    }
    if (now_ms >= c.issued_at_ms + c.ttl_ms) {
      c.expired_dead = true;  // never acceptable afterwards, even if time rewinds
      persist_event("expire|" + session_id + "|" + std::to_string(now_ms));
      return finish(now_ms, user_id, session_id,
                    AuthDecision{false, std::nullopt, AuthOutcome::RejectedExpired});
    }
    // Consume before any verification: a second attempt on this session is a
    // replay no matter how this one turns out.
    c.consumed = true;
    persist_event("consume|" + session_id + "|" + std::to_string(now_ms));
    snapshot = c;
  }

  if (!verify_transcript(snapshot, transcript)) {
    return finish(now_ms, user_id, session_id,
                  AuthDecision{false, std::nullopt, AuthOutcome::RejectedTranscript});
  }

  const auto rec = store_.fetch_active(user_id);
  if (!rec) {
    return finish(now_ms, user_id, session_id,
                  AuthDecision{true, std::nullopt, AuthOutcome::RejectedUnknownUser});
  }

  if (biometric_probe_) biometric_probe_();
  const MatchResult match = match_record(*rec, key, probe);
  const AuthOutcome outcome =
      match.accepted ? AuthOutcome::Accepted : AuthOutcome::RejectedMatch;
  return finish(now_ms, user_id, session_id, AuthDecision{true, match, outcome});
}

void ChallengeService::set_biometric_probe(std::function<void()> probe) {
  biometric_probe_ = std::move(probe);
}

void ChallengeService::set_audit_sink(std::function<void(std::string_view)> sink) {
  audit_sink_ = std::move(sink);
}

std::optional<Challenge> ChallengeService::session(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::size_t ChallengeService::pending_count() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [id, c] : sessions_) {
    if (!c.consumed && !c.expired_dead) ++n;
  }
  return n;
}

}  // namespace charvoc
