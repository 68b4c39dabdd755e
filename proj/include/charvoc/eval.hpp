#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "charvoc/baselines.hpp"
#include "charvoc/scheme.hpp"

namespace charvoc {

/// Desk-scale substitute for extractor embeddings: speaker centers drawn
/// from N(0, sigma_between^2 I), utterances unit-normalized around them with
/// N(0, sigma_within^2 I) noise. Fully deterministic given the seed.
struct SyntheticConfig {
  std::uint32_t speakers = 50;
  std::uint32_t utterances = 10;
  std::uint32_t dim = 192;
  double sigma_within = 0.3;
  double sigma_between = 1.0;
  std::uint64_t seed = 42;
};

struct SpeakerDataset {
  std::vector<std::string> speaker_ids;
  std::vector<std::vector<Embedding>> utterances;  // [speaker][utterance]
  std::uint32_t dim = 0;
  std::string provenance;

  std::size_t speaker_count() const { return speaker_ids.size(); }
  void validate() const;  // >= 2 utterances per speaker, consistent finite dims
};

SpeakerDataset generate_synthetic(const SyntheticConfig& cfg);

// Embedding text format: one vector per line, space-separated decimal reals,
// optional leading "<speaker_id>:" token.
std::vector<std::pair<std::string, Embedding>> load_embeddings(
    const std::filesystem::path& path);
SpeakerDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const SpeakerDataset& ds, const std::filesystem::path& path);

enum class KeyPolicy : std::uint8_t { PerUserKey, StolenKey, FreshKeyPerTemplate };
enum class EvalScheme : std::uint8_t { Cosine, ChaRVoC, Wta, Iom, Roe };

std::string to_string(KeyPolicy p);
KeyPolicy key_policy_from_string(std::string_view name);
std::string to_string(EvalScheme s);
EvalScheme eval_scheme_from_string(std::string_view name);

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
  std::string label;
};

struct EvalConfig {
  SchemeParams charvoc;        // dim_d is overridden by the dataset dim
  BaselineParams baseline;     // seed_key ignored; keys come from the policy
  KeyPolicy policy = KeyPolicy::PerUserKey;
  std::uint64_t pair_seed = 7;
  std::size_t impostor_factor = 10;  // impostor pairs capped at factor x genuine
};

/// Genuine = all same-speaker cross-utterance pairs; impostor = seeded sample
/// of different-speaker pairs. Keys per policy: one per user, victim's key
/// reused by the impostor, or a fresh key per template (the unlinkability
/// scenario, which scores the protected templates against each other).
ScoreSet score_pairs(const SpeakerDataset& ds, EvalScheme scheme,
                     const EvalConfig& cfg);

/// Cosine mapped to [0, 1]: (1 + cos) / 2.
double cosine_score(const Embedding& a, const Embedding& b);

struct MetricsReport {
  double eer_pct = 0.0;
  double auc = 0.0;
  double tmr_at_fmr = 0.0;  // at FMR <= 0.1%
  double threshold_at_eer = 0.0;
};

/// Threshold sweep over the observed scores: FMR(t) = share of impostor
/// scores >= t, FNMR(t) = share of genuine scores < t. EER by linear
/// interpolation at the crossing, AUC by trapezoid over the ROC, TMR at the
/// largest TMR with FMR <= 0.001.
MetricsReport compute_metrics(const ScoreSet& scores);

/// ROC points (FMR, TMR) in FMR-ascending order, endpoints included.
std::vector<std::pair<double, double>> roc_curve(const ScoreSet& scores);

struct UnlinkabilityReport {
  std::vector<double> bin_centers;
  std::vector<double> d_local;  // D(s) per bin
  double d_sys = 0.0;
};

/// Gomez-Barrero style analysis: matched-edge histograms with add-one
/// smoothing, LR(s) = p(s|mated)/p(s|non-mated), D(s) = max(0, 2*LR/(1+LR)-1)
/// and D_sys as the mated-mass-weighted sum. 0 = unlinkable, 1 = linkable.
UnlinkabilityReport unlinkability(const std::vector<double>& mated,
                                  const std::vector<double>& non_mated,
                                  std::uint32_t bins = 100);

struct BenchReport {
  double median_s = 0.0;
  double p95_s = 0.0;
  std::uint32_t trials = 0;
};

/// Wall-clock template-generation latency over pre-generated embeddings
/// (protect() for ChaRVoC, the full keyed hash for baselines); no I/O in the
/// timed section. trials must be >= 30.
BenchReport bench_template_generation(EvalScheme scheme, const EvalConfig& cfg,
                                      std::uint32_t dim, std::uint32_t trials);

}  // namespace charvoc
