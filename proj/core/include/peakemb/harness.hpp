#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "peakemb/cluster_metrics.hpp"
#include "peakemb/functionals.hpp"
#include "peakemb/lld.hpp"
#include "peakemb/manifest.hpp"
#include "peakemb/peak_embedding.hpp"
#include "peakemb/report.hpp"

namespace peakemb {

struct HarnessConfig {
  FrameConfig frame;
  PeConfig pe;
  PeakPickConfig peaks;
  /// A group (or class within a partition) losing more than this fraction of
  /// its utterances to extraction errors aborts every unit that uses it.
  double skip_threshold = 0.10;
  unsigned workers = 1;
  bool standardize = false;
};

std::size_t feature_dimension(FeatureSet fs, const PeConfig& pe);

/// Feature vector of one utterance from its descriptor tracks.
std::vector<double> feature_vector(const LldPair& tracks, FeatureSet fs, const HarnessConfig& cfg);

/// Successfully extracted points for one feature set; entry_index refers to
/// the manifest the table was built from.
struct FeatureTable {
  FeatureSet feature_set = FeatureSet::BaselineFunctionals;
  std::vector<std::size_t> entry_index;
  std::vector<std::vector<double>> points;
};

struct ExtractionResult {
  std::vector<FeatureTable> tables;
  /// Sorted by (utterance_id, feature set).
  std::vector<SkippedUtterance> skipped;

  const FeatureTable& table(FeatureSet fs) const;
};

/// Loads every utterance once and computes each requested feature set.
/// Utterances run in parallel over cfg.workers threads; results are identical
/// for any worker count.
ExtractionResult extract_features(const DatasetManifest& manifest,
                                  std::span<const FeatureSet> feature_sets,
                                  const HarnessConfig& cfg);

/// Points of `table` whose manifest entry passes `keep`, ordered by utterance_id.
LabeledPointSet point_set(const DatasetManifest& manifest, const FeatureTable& table,
                          const std::function<bool(const ManifestEntry&)>& keep);

struct PairExperiment {
  std::vector<PairMetric> per_pair;
  std::vector<AbortedUnit> aborted;
};

struct PartitionExperiment {
  std::vector<PartitionMetric> per_partition;
  std::vector<AbortedUnit> aborted;
};

/// Metrics for every unordered pair of group labels. Throws SingleLabel with
/// fewer than two groups.
PairExperiment run_pair_experiment(const DatasetManifest& manifest,
                                   const ExtractionResult& extraction, FeatureSet fs,
                                   const HarnessConfig& cfg);

/// Metrics over the rhythm classes inside each partition. Throws NoPartitions
/// when any entry lacks a partition tag and SingleClassPartition when a
/// partition holds a single class.
PartitionExperiment run_word_experiment(const DatasetManifest& manifest,
                                        const ExtractionResult& extraction, FeatureSet fs,
                                        const HarnessConfig& cfg);

enum class EvalMode { Pairs, Words };

/// Extraction, experiment and aggregation in one call.
ExperimentReport run_evaluation(const DatasetManifest& manifest, EvalMode mode,
                                std::span<const FeatureSet> feature_sets,
                                const HarnessConfig& cfg);

}  // namespace peakemb
