#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "charvoc/baselines.hpp"
#include "charvoc/scheme.hpp"

namespace charvoc {

enum class Scheme : std::uint8_t { ChaRVoC = 0, Wta, Iom, Roe };

std::string to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

struct StoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One persisted enrollment. For the ChaRVoC scheme the template field holds
/// the key-XORed bits, never a raw binarization; for baselines it holds the
/// index code. params_text / template_hex are the canonical log encodings so
/// load/store round-trips are byte-identical.
struct ProtectedRecord {
  std::string user_id;
  Scheme scheme = Scheme::ChaRVoC;
  std::uint64_t generation = 0;  // assigned by the store
  bool revoked = false;
  std::string params_text;
  std::string template_hex;
  double threshold = 0.6;
  std::int64_t created_at = 0;  // unix seconds

  SchemeParams scheme_params() const;           // ChaRVoC records
  ProtectedTemplate protected_template() const;  // ChaRVoC records
  BaselineParams baseline_params() const;        // baseline records (no key)
  IndexCode index_code() const;                  // baseline records
};

ProtectedRecord make_charvoc_record(std::string user_id, const ProtectedTemplate& t,
                                    double threshold, std::int64_t created_at);
ProtectedRecord make_baseline_record(std::string user_id, Scheme scheme,
                                     const IndexCode& code, const BaselineParams& p,
                                     double threshold, std::int64_t created_at);

// Log line codec. Format, one record per line:
//   v1|user_id|scheme|generation|status|hex_params|hex_template|threshold|created_at_unix
std::string format_record_line(const ProtectedRecord& rec);
ProtectedRecord parse_record_line(std::string_view line);

/// Single-file append-only record log. Enroll supersedes (generation + 1),
/// revoke tombstones; latest generation wins on load. Superseded records are
/// retained for the unlinkability analysis. Reads take a shared lock; writes
/// are serialized and appended under an advisory file lock.
class TemplateStore {
public:
  TemplateStore() = default;  // in-memory only
  explicit TemplateStore(std::filesystem::path log_path);
  ~TemplateStore();

  TemplateStore(const TemplateStore&) = delete;
  TemplateStore& operator=(const TemplateStore&) = delete;

  /// Returns the assigned generation (strictly increasing per user).
  std::uint64_t enroll(ProtectedRecord rec);

  /// Marks the active record revoked. Returns false when there is none.
  bool revoke(const std::string& user_id, Scheme scheme, std::int64_t now);

  /// Highest-generation non-revoked record; any scheme when none is given.
  std::optional<ProtectedRecord> fetch_active(
      const std::string& user_id, std::optional<Scheme> scheme = std::nullopt) const;

  /// Full history for a user, superseded and revoked records included.
  std::vector<ProtectedRecord> records_for(const std::string& user_id) const;

  std::size_t record_count() const;

private:
  void replay_line(std::string_view line);
  void apply_enroll(ProtectedRecord rec);
  void apply_revoke(const std::string& user_id, Scheme scheme);
  void append_line(const std::string& line);

  mutable std::shared_mutex mu_;
  std::vector<ProtectedRecord> records_;                 // everything, in log order
  std::map<std::pair<std::string, std::uint8_t>, std::size_t> active_;  // -> records_ index
  std::map<std::string, std::uint64_t> max_generation_;
  std::filesystem::path log_path_;
  int log_fd_ = -1;
};

}  // namespace charvoc
