#include "charvoc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "charvoc/rng.hpp"
#include "charvoc/text.hpp"

namespace charvoc {

std::string to_string(KeyPolicy p) {
  switch (p) {
    case KeyPolicy::PerUserKey:
      return "per-user-key";
    case KeyPolicy::StolenKey:
      return "stolen-key";
    case KeyPolicy::FreshKeyPerTemplate:
      return "fresh-key";
  }
  throw std::invalid_argument("unknown key policy");
}

KeyPolicy key_policy_from_string(std::string_view name) {
  if (name == "per-user-key" || name == "per-user") return KeyPolicy::PerUserKey;
  if (name == "stolen-key" || name == "stolen") return KeyPolicy::StolenKey;
  if (name == "fresh-key" || name == "fresh") return KeyPolicy::FreshKeyPerTemplate;
  throw std::invalid_argument("unknown key policy: '" + std::string(name) + "'");
}

std::string to_string(EvalScheme s) {
  switch (s) {
    case EvalScheme::Cosine:
      return "cosine";
    case EvalScheme::ChaRVoC:
      return "charvoc";
    case EvalScheme::Wta:
      return "wta";
    case EvalScheme::Iom:
      return "iom";
    case EvalScheme::Roe:
      return "roe";
  }
  throw std::invalid_argument("unknown eval scheme");
}

EvalScheme eval_scheme_from_string(std::string_view name) {
  if (name == "cosine") return EvalScheme::Cosine;
  if (name == "charvoc") return EvalScheme::ChaRVoC;
  if (name == "wta") return EvalScheme::Wta;
  if (name == "iom") return EvalScheme::Iom;
  if (name == "roe") return EvalScheme::Roe;
  throw std::invalid_argument("unknown eval scheme: '" + std::string(name) + "'");
}

SpeakerDataset generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.speakers < 2 || cfg.utterances < 2) {
    throw std::invalid_argument("need at least 2 speakers and 2 utterances each");
  }
  if (cfg.dim == 0) throw std::invalid_argument("dim must be >= 1");
  if (cfg.sigma_within < 0 || cfg.sigma_between < 0) {
    throw std::invalid_argument("sigmas must be non-negative");
  }
  std::mt19937_64 gen(cfg.seed);
  Sampler sampler(gen);
  SpeakerDataset ds;
  ds.dim = cfg.dim;
  ds.provenance = "synthetic(seed=" + std::to_string(cfg.seed) +
                  ",sw=" + format_double(cfg.sigma_within) +
                  ",sb=" + format_double(cfg.sigma_between) + ")";
  std::vector<double> center(cfg.dim);
  char id[16];
  for (std::uint32_t s = 0; s < cfg.speakers; ++s) {
    std::snprintf(id, sizeof(id), "spk%03u", s);
    ds.speaker_ids.emplace_back(id);
    for (auto& c : center) c = cfg.sigma_between * sampler.normal();
    std::vector<Embedding> utts;
    utts.reserve(cfg.utterances);
    for (std::uint32_t u = 0; u < cfg.utterances; ++u) {
      Embedding e;
      e.values.resize(cfg.dim);
      double norm2 = 0.0;
      for (std::uint32_t k = 0; k < cfg.dim; ++k) {
        e.values[k] = center[k] + cfg.sigma_within * sampler.normal();
        norm2 += e.values[k] * e.values[k];
      }
      if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : e.values) v *= inv;
      }
      utts.push_back(std::move(e));
    }
    ds.utterances.push_back(std::move(utts));
  }
  return ds;
}

double cosine_score(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim() || a.dim() == 0) {
    throw std::invalid_argument("dimension mismatch in cosine");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.5;  // zero vector: neutral score
  const double c = dot / std::sqrt(na * nb);
  return std::clamp(0.5 * (1.0 + c), 0.0, 1.0);
}

namespace {

struct PairRef {
  std::uint32_t enroll_speaker, enroll_utt;
  std::uint32_t probe_speaker, probe_utt;
};

// Deterministic seeded sample of different-speaker pairs, capped.
std::vector<PairRef> sample_impostors(const SpeakerDataset& ds, std::uint64_t seed,
                                      std::size_t cap) {
  const std::uint64_t s_count = ds.speaker_count();
  // Utterance counts can differ per speaker after ingestion; sample within
  // each speaker's actual range and pack dedup keys with the maximum count.
  std::uint64_t u_count = 0;
  for (const auto& utts : ds.utterances) {
    u_count = std::max<std::uint64_t>(u_count, utts.size());
  }
  const std::uint64_t total_upper = s_count * (s_count - 1) * u_count * u_count;
  const std::size_t target = static_cast<std::size_t>(
      std::min<std::uint64_t>(cap, total_upper));
  std::mt19937_64 gen(seed);
  Sampler sampler(gen);
  std::vector<PairRef> pairs;
  std::unordered_set<std::uint64_t> seen;
  pairs.reserve(target);
  std::size_t attempts = 0;
  const std::size_t max_attempts = target * 64 + 1024;
  while (pairs.size() < target && attempts < max_attempts) {
    ++attempts;
    const auto a = static_cast<std::uint32_t>(sampler.below(s_count));
    const auto b = static_cast<std::uint32_t>(sampler.below(s_count));
    if (a == b) continue;
    const auto i =
        static_cast<std::uint32_t>(sampler.below(ds.utterances[a].size()));
    const auto j =
        static_cast<std::uint32_t>(sampler.below(ds.utterances[b].size()));
    const std::uint64_t key =
        ((static_cast<std::uint64_t>(a) * u_count + i) * s_count + b) * u_count + j;
    if (seen.insert(key).second) pairs.push_back(PairRef{a, i, b, j});
  }
  return pairs;
}

SecretKey user_key(const SpeakerDataset& ds, std::uint32_t speaker) {
  return SecretKey{ds.speaker_ids[speaker] + ":key"};
}

// ChaRVoC scoring walks the real pipeline: protect with the enrollment key,
// recover with the presented key, match binarizations. Key digests and
// binarizations are cached; the XORs are cheap.
class CharvocScorer {
public:
  CharvocScorer(const SpeakerDataset& ds, SchemeParams params)
      : ds_(ds), params_(params) {
    params_.dim_d = ds.dim;
    params_.validate();
    bins_.resize(ds.speaker_count());
    for (std::size_t s = 0; s < ds.speaker_count(); ++s) {
      bins_[s].reserve(ds.utterances[s].size());
      for (const auto& e : ds.utterances[s]) {
        bins_[s].push_back(binarize(e, params_));
      }
    }
  }

  const BitVec& digest(const SecretKey& key) {
    const auto it = digests_.find(key.bytes);
    if (it != digests_.end()) return it->second;
    return digests_
        .emplace(key.bytes, hash_key(key, params_.template_len(), params_.hash_id))
        .first->second;
  }

  double score(std::uint32_t es, std::uint32_t eu, const SecretKey& enroll_key,
               std::uint32_t ps, std::uint32_t pu, const SecretKey& presented_key) {
    const BitVec stored = digest(enroll_key) ^ bins_[es][eu];
    const BitVec recovered = stored ^ digest(presented_key);
    return similarity(recovered, bins_[ps][pu]);
  }

  /// Linkage view: similarity of the two protected templates themselves.
  double protected_score(std::uint32_t as, std::uint32_t au, const SecretKey& ka,
                         std::uint32_t bs, std::uint32_t bu, const SecretKey& kb) {
    const BitVec t1 = digest(ka) ^ bins_[as][au];
    const BitVec t2 = digest(kb) ^ bins_[bs][bu];
    return similarity(t1, t2);
  }

private:
  const SpeakerDataset& ds_;
  SchemeParams params_;
  std::vector<std::vector<BitVec>> bins_;
  std::unordered_map<std::string, BitVec> digests_;
};

BaselineScheme to_baseline(EvalScheme s) {
  switch (s) {
    case EvalScheme::Wta:
      return BaselineScheme::Wta;
    case EvalScheme::Iom:
      return BaselineScheme::Iom;
    case EvalScheme::Roe:
      return BaselineScheme::Roe;
    default:
      throw std::invalid_argument("not a baseline scheme");
  }
}

// Baseline codes grouped by key so projection material is generated once per
// key, per the read-only-material caching model.
class BaselineScorer {
public:
  BaselineScorer(const SpeakerDataset& ds, BaselineScheme scheme, BaselineParams p)
      : ds_(ds), scheme_(scheme), params_(std::move(p)) {}

  /// Codes for a set of (speaker, utterance) probes under one key.
  std::vector<IndexCode> hash_under(const SecretKey& key,
                                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& probes) {
    BaselineParams p = params_;
    p.seed_key = key;
    std::vector<IndexCode> out;
    out.reserve(probes.size());
    switch (scheme_) {
      case BaselineScheme::Wta: {
        const WtaMaterial m = wta_material(p, ds_.dim);
        for (const auto& [s, u] : probes) out.push_back(wta_hash_with(m, ds_.utterances[s][u]));
        break;
      }
      case BaselineScheme::Iom: {
        const IomMaterial m = iom_material(p, ds_.dim);
        for (const auto& [s, u] : probes) out.push_back(iom_hash_with(m, ds_.utterances[s][u]));
        break;
      }
      case BaselineScheme::Roe: {
        const RoeMaterial m = roe_material(p, ds_.dim);
        for (const auto& [s, u] : probes) out.push_back(roe_hash_with(m, ds_.utterances[s][u]));
        break;
      }
    }
    return out;
  }

private:
  const SpeakerDataset& ds_;
  BaselineScheme scheme_;
  BaselineParams params_;
};

ScoreSet score_pairs_charvoc(const SpeakerDataset& ds, const EvalConfig& cfg,
                             const std::vector<PairRef>& impostors) {
  CharvocScorer scorer(ds, cfg.charvoc);
  ScoreSet out;
  std::uint64_t fresh_counter = 0;
  const auto fresh = [&] { return SecretKey{"fresh:" + std::to_string(fresh_counter++)}; };

  for (std::uint32_t s = 0; s < ds.speaker_count(); ++s) {
    const SecretKey ks = user_key(ds, s);
    const auto u_count = static_cast<std::uint32_t>(ds.utterances[s].size());
    for (std::uint32_t i = 0; i < u_count; ++i) {
      for (std::uint32_t j = i + 1; j < u_count; ++j) {
        if (cfg.policy == KeyPolicy::FreshKeyPerTemplate) {
          out.genuine.push_back(scorer.protected_score(s, i, fresh(), s, j, fresh()));
        } else {
          out.genuine.push_back(scorer.score(s, i, ks, s, j, ks));
        }
      }
    }
  }
  for (const auto& pr : impostors) {
    const SecretKey victim = user_key(ds, pr.enroll_speaker);
    switch (cfg.policy) {
      case KeyPolicy::PerUserKey:
        out.impostor.push_back(scorer.score(pr.enroll_speaker, pr.enroll_utt, victim,
                                            pr.probe_speaker, pr.probe_utt,
                                            user_key(ds, pr.probe_speaker)));
        break;
      case KeyPolicy::StolenKey:
        out.impostor.push_back(scorer.score(pr.enroll_speaker, pr.enroll_utt, victim,
                                            pr.probe_speaker, pr.probe_utt, victim));
        break;
      case KeyPolicy::FreshKeyPerTemplate:
        out.impostor.push_back(scorer.protected_score(pr.enroll_speaker, pr.enroll_utt,
                                                      fresh(), pr.probe_speaker,
                                                      pr.probe_utt, fresh()));
        break;
    }
  }
  return out;
}

ScoreSet score_pairs_baseline(const SpeakerDataset& ds, EvalScheme scheme,
                              const EvalConfig& cfg,
                              const std::vector<PairRef>& impostors) {
  BaselineScorer scorer(ds, to_baseline(scheme), cfg.baseline);
  ScoreSet out;
  const std::size_t s_count = ds.speaker_count();

  if (cfg.policy == KeyPolicy::FreshKeyPerTemplate) {
    std::uint64_t fresh_counter = 0;
    const auto fresh_code = [&](std::uint32_t s, std::uint32_t u) {
      const SecretKey k{"fresh:" + std::to_string(fresh_counter++)};
      return scorer.hash_under(k, {{s, u}}).front();
    };
    for (std::uint32_t s = 0; s < s_count; ++s) {
      const auto u_count = static_cast<std::uint32_t>(ds.utterances[s].size());
      for (std::uint32_t i = 0; i < u_count; ++i) {
        for (std::uint32_t j = i + 1; j < u_count; ++j) {
          out.genuine.push_back(index_similarity(fresh_code(s, i), fresh_code(s, j)));
        }
      }
    }
    for (const auto& pr : impostors) {
      out.impostor.push_back(
          index_similarity(fresh_code(pr.enroll_speaker, pr.enroll_utt),
                           fresh_code(pr.probe_speaker, pr.probe_utt)));
    }
    return out;
  }

  // Per-user and stolen-key: codes of each speaker's own utterances under
  // their own key, computed once.
  std::vector<std::vector<IndexCode>> own(s_count);
  for (std::uint32_t s = 0; s < s_count; ++s) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> probes;
    for (std::uint32_t u = 0; u < ds.utterances[s].size(); ++u) probes.emplace_back(s, u);
    own[s] = scorer.hash_under(user_key(ds, s), probes);
  }
  for (std::uint32_t s = 0; s < s_count; ++s) {
    const auto u_count = static_cast<std::uint32_t>(ds.utterances[s].size());
    for (std::uint32_t i = 0; i < u_count; ++i) {
      for (std::uint32_t j = i + 1; j < u_count; ++j) {
        out.genuine.push_back(index_similarity(own[s][i], own[s][j]));
      }
    }
  }

  if (cfg.policy == KeyPolicy::PerUserKey) {
    for (const auto& pr : impostors) {
      out.impostor.push_back(index_similarity(own[pr.enroll_speaker][pr.enroll_utt],
                                              own[pr.probe_speaker][pr.probe_utt]));
    }
    return out;
  }

  // Stolen key: the probe is hashed under the victim's key. Group sampled
  // pairs by victim so material is derived once per victim.
  std::vector<std::vector<std::size_t>> by_victim(s_count);
  for (std::size_t idx = 0; idx < impostors.size(); ++idx) {
    by_victim[impostors[idx].enroll_speaker].push_back(idx);
  }
  out.impostor.resize(impostors.size());
  for (std::uint32_t victim = 0; victim < s_count; ++victim) {
    if (by_victim[victim].empty()) continue;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> probes;
    probes.reserve(by_victim[victim].size());
    for (const std::size_t idx : by_victim[victim]) {
      probes.emplace_back(impostors[idx].probe_speaker, impostors[idx].probe_utt);
    }
    const auto codes = scorer.hash_under(user_key(ds, victim), probes);
    for (std::size_t k = 0; k < codes.size(); ++k) {
      const auto& pr = impostors[by_victim[victim][k]];
      out.impostor[by_victim[victim][k]] =
          index_similarity(own[pr.enroll_speaker][pr.enroll_utt], codes[k]);
    }
  }
  return out;
}

}  // namespace

ScoreSet score_pairs(const SpeakerDataset& ds, EvalScheme scheme,
                     const EvalConfig& cfg) {
  ds.validate();
  std::size_t genuine_count = 0;
  for (const auto& utts : ds.utterances) {
    genuine_count += utts.size() * (utts.size() - 1) / 2;
  }
  const auto impostors =
      sample_impostors(ds, cfg.pair_seed, genuine_count * cfg.impostor_factor);

  ScoreSet out;
  switch (scheme) {
    case EvalScheme::Cosine:
      for (std::uint32_t s = 0; s < ds.speaker_count(); ++s) {
        const auto u_count = static_cast<std::uint32_t>(ds.utterances[s].size());
        for (std::uint32_t i = 0; i < u_count; ++i) {
          for (std::uint32_t j = i + 1; j < u_count; ++j) {
            out.genuine.push_back(cosine_score(ds.utterances[s][i], ds.utterances[s][j]));
          }
        }
      }
      for (const auto& pr : impostors) {
        out.impostor.push_back(cosine_score(ds.utterances[pr.enroll_speaker][pr.enroll_utt],
                                            ds.utterances[pr.probe_speaker][pr.probe_utt]));
      }
      break;
    case EvalScheme::ChaRVoC:
      out = score_pairs_charvoc(ds, cfg, impostors);
      break;
    case EvalScheme::Wta:
    case EvalScheme::Iom:
    case EvalScheme::Roe:
      out = score_pairs_baseline(ds, scheme, cfg, impostors);
      break;
  }
  out.label = to_string(scheme) + "/" + to_string(cfg.policy);
  return out;
}

namespace {

struct SweepPoint {
  double threshold;
  double fmr;
  double fnmr;
};

// FMR(t) = share of impostor scores >= t; FNMR(t) = share of genuine < t.
// Thresholds are the observed scores plus a sentinel past the maximum, so the
// sweep always covers FMR 1 -> 0.
std::vector<SweepPoint> sweep(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    throw std::invalid_argument("metrics need non-empty genuine and impostor sets");
  }
  for (const double s : scores.genuine) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite genuine score");
  }
  for (const double s : scores.impostor) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite impostor score");
  }
  std::vector<double> thresholds;
  thresholds.reserve(scores.genuine.size() + scores.impostor.size() + 1);
  thresholds.insert(thresholds.end(), scores.genuine.begin(), scores.genuine.end());
  thresholds.insert(thresholds.end(), scores.impostor.begin(), scores.impostor.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);  // sentinel: FMR 0, FNMR 1

  std::vector<double> gen_sorted = scores.genuine;
  std::vector<double> imp_sorted = scores.impostor;
  std::sort(gen_sorted.begin(), gen_sorted.end());
  std::sort(imp_sorted.begin(), imp_sorted.end());
  const double ng = static_cast<double>(gen_sorted.size());
  const double ni = static_cast<double>(imp_sorted.size());

  std::vector<SweepPoint> points;
  points.reserve(thresholds.size());
  for (const double t : thresholds) {
    const auto below_g =
        std::lower_bound(gen_sorted.begin(), gen_sorted.end(), t) - gen_sorted.begin();
    const auto below_i =
        std::lower_bound(imp_sorted.begin(), imp_sorted.end(), t) - imp_sorted.begin();
    points.push_back(SweepPoint{t, (ni - static_cast<double>(below_i)) / ni,
                                static_cast<double>(below_g) / ng});
  }
  return points;
}

}  // namespace

MetricsReport compute_metrics(const ScoreSet& scores) {
  const auto points = sweep(scores);
  MetricsReport report;

  // EER: first point where FNMR >= FMR, linear interpolation from the
  // previous point. FNMR - FMR is non-decreasing along the sweep.
  std::size_t idx = 0;
  while (idx < points.size() && points[idx].fnmr < points[idx].fmr) ++idx;
  if (idx == 0) {
    report.eer_pct = 100.0 * 0.5 * (points[0].fmr + points[0].fnmr);
    report.threshold_at_eer = points[0].threshold;
  } else if (idx == points.size()) {
    // Cannot happen with the sentinel in place (FNMR 1 >= FMR 0), kept as a
    // guard for malformed inputs.
    report.eer_pct = 50.0;
    report.threshold_at_eer = points.back().threshold;
  } else {
    const auto& a = points[idx - 1];
    const auto& b = points[idx];
    const double denom = (b.fnmr - a.fnmr) - (b.fmr - a.fmr);
    const double t = denom > 0.0 ? (a.fmr - a.fnmr) / denom : 0.0;
    report.eer_pct = 100.0 * (a.fmr + t * (b.fmr - a.fmr));
    report.threshold_at_eer = a.threshold + t * (b.threshold - a.threshold);
  }

  // AUC by trapezoid over (FMR, TMR), swept from (1,1) down to (0,0).
  double auc = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double x1 = points[k + 1].fmr, x0 = points[k].fmr;
    const double y1 = 1.0 - points[k + 1].fnmr, y0 = 1.0 - points[k].fnmr;
    auc += (x0 - x1) * (y0 + y1) * 0.5;
  }
  report.auc = auc;

  double best_tmr = 0.0;
  for (const auto& p : points) {
    if (p.fmr <= 0.001) best_tmr = std::max(best_tmr, 1.0 - p.fnmr);
  }
  report.tmr_at_fmr = best_tmr;
  return report;
}

std::vector<std::pair<double, double>> roc_curve(const ScoreSet& scores) {
  const auto points = sweep(scores);
  std::vector<std::pair<double, double>> roc;
  roc.reserve(points.size());
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    roc.emplace_back(it->fmr, 1.0 - it->fnmr);
  }
  return roc;
}

UnlinkabilityReport unlinkability(const std::vector<double>& mated,
                                  const std::vector<double>& non_mated,
                                  std::uint32_t bins) {
  if (mated.empty() || non_mated.empty()) {
    throw std::invalid_argument("unlinkability needs non-empty score lists");
  }
  if (bins < 10) throw std::invalid_argument("need at least 10 bins");
  double lo = mated.front(), hi = mated.front();
  const auto widen = [&](const std::vector<double>& xs) {
    for (const double x : xs) {
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite score");
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  };
  widen(mated);
  widen(non_mated);
  if (hi <= lo) {
    throw std::invalid_argument("degenerate score distributions (single bin)");
  }
  const double width = (hi - lo) / bins;
  std::vector<std::uint64_t> cm(bins, 0), cn(bins, 0);
  const auto bin_of = [&](double x) {
    const auto b = static_cast<std::int64_t>((x - lo) / width);
    return static_cast<std::size_t>(std::clamp<std::int64_t>(b, 0, bins - 1));
  };
  for (const double x : mated) ++cm[bin_of(x)];
  for (const double x : non_mated) ++cn[bin_of(x)];

  UnlinkabilityReport report;
  report.bin_centers.reserve(bins);
  report.d_local.reserve(bins);
  // Add-one smoothing keeps every likelihood ratio finite.
  const double denom_m = static_cast<double>(mated.size()) + bins;
  const double denom_n = static_cast<double>(non_mated.size()) + bins;
  double d_sys = 0.0;
  for (std::uint32_t b = 0; b < bins; ++b) {
    const double pm = (static_cast<double>(cm[b]) + 1.0) / denom_m;
    const double pn = (static_cast<double>(cn[b]) + 1.0) / denom_n;
    const double lr = pm / pn;  // prior ratio w = 1
    const double d = std::max(0.0, 2.0 * (lr / (1.0 + lr)) - 1.0);
    report.bin_centers.push_back(lo + (b + 0.5) * width);
    report.d_local.push_back(d);
    d_sys += d * pm;
  }
  report.d_sys = d_sys;
  return report;
}

BenchReport bench_template_generation(EvalScheme scheme, const EvalConfig& cfg,
                                      std::uint32_t dim, std::uint32_t trials) {
  if (trials < 30) throw std::invalid_argument("need at least 30 trials");
  if (scheme == EvalScheme::Cosine) {
    throw std::invalid_argument("cosine has no template generation to bench");
  }
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
  Sampler sampler(gen);
  std::vector<Embedding> inputs;
  inputs.reserve(trials);
  for (std::uint32_t t = 0; t < trials; ++t) {
    Embedding e;
    e.values.resize(dim);
    double norm2 = 0.0;
    for (auto& v : e.values) {
      v = sampler.normal();
      norm2 += v * v;
    }
    const double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 1.0;
    for (auto& v : e.values) v *= inv;
    inputs.push_back(std::move(e));
  }
  const SecretKey key{"bench:key"};
  SchemeParams params = cfg.charvoc;
  params.dim_d = dim;
  BaselineParams bparams = cfg.baseline;
  bparams.seed_key = key;

  std::vector<double> seconds;
  seconds.reserve(trials);
  using clock = std::chrono::steady_clock;
  for (std::uint32_t t = 0; t < trials; ++t) {
    const auto start = clock::now();
    switch (scheme) {
      case EvalScheme::ChaRVoC: {
        volatile std::uint8_t sink = protect(key, inputs[t], params).bits.bytes()[0];
        (void)sink;
        break;
      }
      case EvalScheme::Wta: {
        volatile std::uint32_t sink = wta_hash(inputs[t], bparams).indices[0];
        (void)sink;
        break;
      }
      case EvalScheme::Iom: {
        volatile std::uint32_t sink = iom_hash(inputs[t], bparams).indices[0];
        (void)sink;
        break;
      }
      case EvalScheme::Roe: {
        volatile std::uint32_t sink = roe_hash(inputs[t], bparams).indices[0];
        (void)sink;
        break;
      }
      default:
        break;
    }
    const auto stop = clock::now();
    seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(seconds.begin(), seconds.end());
  BenchReport report;
  report.trials = trials;
  report.median_s = trials % 2 == 1
                        ? seconds[trials / 2]
                        : 0.5 * (seconds[trials / 2 - 1] + seconds[trials / 2]);
  const std::size_t rank95 =
      static_cast<std::size_t>(std::ceil(0.95 * trials)) - 1;  // nearest rank
  report.p95_s = seconds[std::min(rank95, seconds.size() - 1)];
  return report;
}

}  // namespace charvoc
