#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>

#include "charvoc/scheme.hpp"
#include "charvoc/store.hpp"

namespace charvoc {

/// A single-use numeric challenge. `consumed` transitions false -> true
/// exactly once; an expired session is tombstoned so it can never be
/// accepted afterwards.
struct Challenge {
  std::string session_id;
  std::string user_id;
  std::string digits;
  std::int64_t issued_at_ms = 0;
  std::int64_t ttl_ms = 0;
  bool consumed = false;
  bool expired_dead = false;
};

enum class AuthOutcome : std::uint8_t {
  Accepted,
  RejectedTranscript,
  RejectedExpired,
  RejectedReplayed,
  RejectedMatch,
  RejectedUnknownUser,
};

std::string to_string(AuthOutcome o);

struct AuthDecision {
  bool liveness_ok = false;
  std::optional<MatchResult> match;  // absent whenever liveness failed
  AuthOutcome outcome = AuthOutcome::RejectedReplayed;
};

struct UnknownUserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Transcript normalization standing in for a speech-to-text stage: strips
/// whitespace and punctuation and maps spelled-out English digit words to
/// numerals ("one nine 8" -> "198"). Any other word yields a string that can
/// never equal a digit challenge.
std::string normalize_transcript(std::string_view transcript);

/// True iff the normalized transcript equals the challenge digits.
bool verify_transcript(const Challenge& c, std::string_view transcript);

/// Challenge-response session machine: issues single-use numeric challenges,
/// verifies the spoken transcript, enforces expiry and replay defense, and
/// only then runs the template match. The consume transition on a session is
/// atomic; at most one authenticate call ever passes it.
class ChallengeService {
public:
  struct Config {
    std::uint32_t digit_len = 6;
    std::int64_t ttl_ms = 60'000;
    bool deterministic = false;  // test mode: seeded instead of secure RNG
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> session_log;  // persistence across processes
    std::optional<std::filesystem::path> audit_log;    // one line per decision
  };

  explicit ChallengeService(TemplateStore& store)
      : ChallengeService(store, Config{}) {}
  ChallengeService(TemplateStore& store, Config cfg);
  ~ChallengeService();

  /// Fresh session for an enrolled user. Throws UnknownUserError otherwise.
  Challenge issue(const std::string& user_id, std::int64_t now_ms);

  /// Runs the full decision chain: session ownership, expiry, single-use
  /// consumption (marked before any verification), transcript, then the
  /// template match against the user's active record. All failures are
  /// outcomes, never exceptions.
  AuthDecision authenticate(const std::string& user_id, const std::string& session_id,
                            std::string_view transcript, const SecretKey& key,
                            const Embedding& probe, std::int64_t now_ms);

  /// Instrumentation hook fired right before any key hashing / binarization;
  /// lets tests observe the liveness short-circuit.
  void set_biometric_probe(std::function<void()> probe);

  /// Extra sink for audit lines ("ms|user|session|outcome").
  void set_audit_sink(std::function<void(std::string_view)> sink);

  std::optional<Challenge> session(const std::string& session_id) const;
  std::size_t pending_count() const;

private:
  std::string fresh_session_id();
  std::string fresh_digits();
  std::uint64_t next_u64();
  void persist_event(const std::string& line);
  void audit(std::int64_t now_ms, const std::string& user, const std::string& session,
             AuthOutcome outcome);
  AuthDecision finish(std::int64_t now_ms, const std::string& user,
                      const std::string& session, AuthDecision d);
  MatchResult match_record(const ProtectedRecord& rec, const SecretKey& key,
                           const Embedding& probe) const;
  void load_session_log();

  TemplateStore& store_;
  Config cfg_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Challenge> sessions_;
  std::mt19937_64 prng_;
  std::function<void()> biometric_probe_;
  std::function<void(std::string_view)> audit_sink_;
  int session_fd_ = -1;
  int audit_fd_ = -1;
};

}  // namespace charvoc
