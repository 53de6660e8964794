#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peakemb/cluster_metrics.hpp"

namespace peakemb {

enum class FeatureSet {
  BaselineFunctionals,
  PePitch,
  PeLoudness,
  PePitchConcatLoudness,
  PePitchSumLoudness,
};

inline constexpr std::array<FeatureSet, 5> kAllFeatureSets = {
    FeatureSet::BaselineFunctionals, FeatureSet::PePitch, FeatureSet::PeLoudness,
    FeatureSet::PePitchConcatLoudness, FeatureSet::PePitchSumLoudness};

/// "BaselineFunctionals", "PE_Pitch", ... as used in reports.
std::string_view report_name(FeatureSet fs) noexcept;
/// "baseline", "pe-pitch", "pe-loudness", "pe-concat", "pe-sum".
std::string_view cli_name(FeatureSet fs) noexcept;
/// Accepts either spelling.
std::optional<FeatureSet> parse_feature_set(std::string_view name);

struct PairMetric {
  std::string label_a;  // label_a < label_b
  std::string label_b;
  FeatureSet feature_set = FeatureSet::BaselineFunctionals;
  MetricPair metrics;
};

struct PartitionMetric {
  std::string partition;
  FeatureSet feature_set = FeatureSet::BaselineFunctionals;
  MetricPair metrics;
};

struct SkippedUtterance {
  std::string utterance_id;
  FeatureSet feature_set = FeatureSet::BaselineFunctionals;
  std::string reason;
};

/// A group pair or partition left out because too many of its utterances failed.
struct AbortedUnit {
  FeatureSet feature_set = FeatureSet::BaselineFunctionals;
  std::string scope;  // "a|b" for pairs, the partition tag for words
  std::string reason;
};

struct RankedPair {
  std::string label_a;
  std::string label_b;
  double value = 0.0;
};

struct Rankings {
  std::vector<RankedPair> best_sc;
  std::vector<RankedPair> worst_sc;
  std::vector<RankedPair> best_gsi;
  std::vector<RankedPair> worst_gsi;
};

struct ExperimentReport {
  std::string mode;  // "pairs" or "words"
  std::vector<PairMetric> per_pair;
  std::vector<PartitionMetric> per_partition;
  std::map<FeatureSet, MetricPair> averages;
  std::map<FeatureSet, Rankings> rankings;
  std::vector<SkippedUtterance> skipped;
  std::vector<AbortedUnit> aborted;
};

inline constexpr std::size_t kRankingDepth = 6;

/// Averages per feature set (from per_pair when present, else per_partition)
/// and, for pairs, the best/worst `depth` pairs per metric. Ties in a ranking
/// are broken by lexicographic pair label. Throws EmptyResults.
ExperimentReport aggregate_report(std::vector<PairMetric> per_pair,
                                  std::vector<PartitionMetric> per_partition,
                                  std::size_t depth = kRankingDepth);

std::string to_json(const ExperimentReport& report);
ExperimentReport report_from_json(std::string_view json);

/// Columns: kind,feature_set,label_a,label_b,partition,sc,gsi
void write_report_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace peakemb
