#include "peakemb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "peakemb/error.hpp"
#include "peakemb/wav.hpp"

namespace peakemb {
namespace {

struct UtteranceResult {
  std::vector<std::optional<std::vector<double>>> features;
  std::vector<std::string> reasons;
};

UtteranceResult extract_one(const ManifestEntry& entry, std::span<const FeatureSet> sets,
                            const HarnessConfig& cfg) {
  UtteranceResult r;
  r.features.resize(sets.size());
  r.reasons.resize(sets.size());
  LldPair tracks;
  try {
    tracks = compute_llds(load_wav(entry.audio_path), cfg.frame);
  } catch (const Error& e) {
    std::fill(r.reasons.begin(), r.reasons.end(), e.what());
    return r;
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    try {
      r.features[s] = feature_vector(tracks, sets[s], cfg);
    } catch (const Error& e) {
      r.reasons[s] = e.what();
    }
  }
  return r;
}

// Fraction of a labelled subset that failed extraction, with a readable reason
// when it exceeds the threshold.
struct SkipCounter {
  std::map<std::string, std::size_t> total;
  std::map<std::string, std::size_t> failed;

  std::optional<std::string> problem(const std::string& key, double threshold) const {
    const auto t = total.count(key) ? total.at(key) : 0;
    const auto f = failed.count(key) ? failed.at(key) : 0;
    if (t == 0) return "no entries for '" + key + "'";
    if (f == t || static_cast<double>(f) > threshold * static_cast<double>(t)) {
      return "'" + key + "' skipped " + std::to_string(f) + " of " + std::to_string(t) +
             " utterances";
    }
    return std::nullopt;
  }
};

template <typename KeyFn>
SkipCounter count_skips(const DatasetManifest& manifest, const ExtractionResult& extraction,
                        FeatureSet fs, KeyFn&& key) {
  SkipCounter c;
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) {
    ++c.total[key(e)];
    by_id[e.utterance_id] = &e;
  }
  for (const auto& s : extraction.skipped) {
    if (s.feature_set != fs) continue;
    if (auto it = by_id.find(s.utterance_id); it != by_id.end()) ++c.failed[key(*it->second)];
  }
  return c;
}

}  // namespace

std::size_t feature_dimension(FeatureSet fs, const PeConfig& pe) {
  switch (fs) {
    case FeatureSet::BaselineFunctionals: return 6;
    case FeatureSet::PePitchConcatLoudness: return 2 * pe.chunk_count;
    default: return pe.chunk_count;
  }
}

std::vector<double> feature_vector(const LldPair& tracks, FeatureSet fs, const HarnessConfig& cfg) {
  switch (fs) {
    case FeatureSet::BaselineFunctionals: {
      const auto f = compute_functionals(tracks.pitch, tracks.loudness, cfg.peaks).as_array();
      return {f.begin(), f.end()};
    }
    case FeatureSet::PePitch:
      return embed_track(tracks.pitch, cfg.pe).values;
    case FeatureSet::PeLoudness:
      return embed_track(tracks.loudness, cfg.pe).values;
    case FeatureSet::PePitchConcatLoudness:
      return combine(embed_track(tracks.pitch, cfg.pe), embed_track(tracks.loudness, cfg.pe),
                     CombineMode::Concat)
          .values;
    case FeatureSet::PePitchSumLoudness:
      return combine(embed_track(tracks.pitch, cfg.pe), embed_track(tracks.loudness, cfg.pe),
                     CombineMode::Sum)
          .values;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown feature set");
}

const FeatureTable& ExtractionResult::table(FeatureSet fs) const {
  for (const auto& t : tables) {
    if (t.feature_set == fs) return t;
  }
  throw Error(ErrorCode::InvalidConfig,
              "feature set " + std::string(report_name(fs)) + " was not extracted");
}

ExtractionResult extract_features(const DatasetManifest& manifest,
                                  std::span<const FeatureSet> feature_sets,
                                  const HarnessConfig& cfg) {
  validate(cfg.pe);
  const std::size_t n = manifest.entries.size();
  std::vector<UtteranceResult> results(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = extract_one(manifest.entries[i], feature_sets, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExtractionResult out;
  for (std::size_t s = 0; s < feature_sets.size(); ++s) {
    FeatureTable table;
    table.feature_set = feature_sets[s];
    for (std::size_t i = 0; i < n; ++i) {
      if (results[i].features[s]) {
        table.entry_index.push_back(i);
        table.points.push_back(std::move(*results[i].features[s]));
      } else {
        out.skipped.push_back(
            {manifest.entries[i].utterance_id, feature_sets[s], results[i].reasons[s]});
      }
    }
    out.tables.push_back(std::move(table));
  }
  std::sort(out.skipped.begin(), out.skipped.end(), [](const auto& a, const auto& b) {
    return std::tie(a.utterance_id, a.feature_set) < std::tie(b.utterance_id, b.feature_set);
  });
  return out;
}

LabeledPointSet point_set(const DatasetManifest& manifest, const FeatureTable& table,
                          const std::function<bool(const ManifestEntry&)>& keep) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.entry_index.size(); ++r) {
    if (keep(manifest.entries[table.entry_index[r]])) rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    return manifest.entries[table.entry_index[a]].utterance_id <
           manifest.entries[table.entry_index[b]].utterance_id;
  });
  LabeledPointSet set;
  for (std::size_t r : rows) {
    set.points.push_back(table.points[r]);
    set.labels.push_back(manifest.entries[table.entry_index[r]].group_label);
  }
  return set;
}

PairExperiment run_pair_experiment(const DatasetManifest& manifest,
                                   const ExtractionResult& extraction, FeatureSet fs,
                                   const HarnessConfig& cfg) {
  const auto groups = manifest.groups();
  if (groups.size() < 2) throw Error(ErrorCode::SingleLabel, "pair experiment needs >= 2 groups");
  const auto& table = extraction.table(fs);
  const auto skips =
      count_skips(manifest, extraction, fs, [](const ManifestEntry& e) { return e.group_label; });

  PairExperiment out;
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      const std::string scope = groups[a] + "|" + groups[b];
      auto problem = skips.problem(groups[a], cfg.skip_threshold);
      if (!problem) problem = skips.problem(groups[b], cfg.skip_threshold);
      if (problem) {
        out.aborted.push_back({fs, scope, *problem});
        continue;
      }
      const auto set = point_set(manifest, table, [&](const ManifestEntry& e) {
        return e.group_label == groups[a] || e.group_label == groups[b];
      });
      out.per_pair.push_back({groups[a], groups[b], fs, evaluate_metrics(set, cfg.standardize)});
    }
  }
  return out;
}

PartitionExperiment run_word_experiment(const DatasetManifest& manifest,
                                        const ExtractionResult& extraction, FeatureSet fs,
                                        const HarnessConfig& cfg) {
  for (const auto& e : manifest.entries) {
    if (e.partition_tag.empty()) {
      throw Error(ErrorCode::NoPartitions,
                  "entry '" + e.utterance_id + "' has no partition_tag");
    }
  }
  const auto& table = extraction.table(fs);
  const auto skips = count_skips(manifest, extraction, fs, [](const ManifestEntry& e) {
    return e.partition_tag + "/" + e.group_label;
  });

  PartitionExperiment out;
  for (const auto& partition : manifest.partitions()) {
    std::vector<std::string> classes;
    for (const auto& e : manifest.entries) {
      if (e.partition_tag == partition &&
          std::find(classes.begin(), classes.end(), e.group_label) == classes.end()) {
        classes.push_back(e.group_label);
      }
    }
    if (classes.size() < 2) {
      throw Error(ErrorCode::SingleClassPartition,
                  "partition '" + partition + "' holds only class '" + classes.front() + "'");
    }
    std::sort(classes.begin(), classes.end());
    std::optional<std::string> problem;
    for (const auto& c : classes) {
      if (!problem) problem = skips.problem(partition + "/" + c, cfg.skip_threshold);
    }
    if (problem) {
      out.aborted.push_back({fs, partition, *problem});
      continue;
    }
    const auto set = point_set(manifest, table, [&](const ManifestEntry& e) {
      return e.partition_tag == partition;
    });
    out.per_partition.push_back({partition, fs, evaluate_metrics(set, cfg.standardize)});
  }
  return out;
}

ExperimentReport run_evaluation(const DatasetManifest& manifest, EvalMode mode,
                                std::span<const FeatureSet> feature_sets,
                                const HarnessConfig& cfg) {
  if (mode == EvalMode::Words && manifest.partitions().empty()) {
    throw Error(ErrorCode::NoPartitions, "manifest has no partition tags");
  }
  const auto extraction = extract_features(manifest, feature_sets, cfg);
  std::vector<PairMetric> per_pair;
  std::vector<PartitionMetric> per_partition;
  std::vector<AbortedUnit> aborted;
  for (FeatureSet fs : feature_sets) {
    if (mode == EvalMode::Pairs) {
      auto r = run_pair_experiment(manifest, extraction, fs, cfg);
      per_pair.insert(per_pair.end(), r.per_pair.begin(), r.per_pair.end());
      aborted.insert(aborted.end(), r.aborted.begin(), r.aborted.end());
    } else {
      auto r = run_word_experiment(manifest, extraction, fs, cfg);
      per_partition.insert(per_partition.end(), r.per_partition.begin(), r.per_partition.end());
      aborted.insert(aborted.end(), r.aborted.begin(), r.aborted.end());
    }
  }
  ExperimentReport report = aggregate_report(std::move(per_pair), std::move(per_partition));
  report.mode = mode == EvalMode::Pairs ? "pairs" : "words";
  report.skipped = extraction.skipped;
  report.aborted = std::move(aborted);
  return report;
}

}  // namespace peakemb
