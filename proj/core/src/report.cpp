#include "peakemb/report.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <ostream>
#include <tuple>

#include "peakemb/csv_io.hpp"
#include "peakemb/error.hpp"

namespace peakemb {
namespace {

using Json = nlohmann::ordered_json;

FeatureSet feature_from_json(const Json& j) {
  const auto fs = parse_feature_set(j.get<std::string>());
  if (!fs) throw Error(ErrorCode::MalformedReport, "unknown feature set in report");
  return *fs;
}

Json ranked_to_json(const std::vector<RankedPair>& list) {
  Json out = Json::array();
  for (const auto& r : list) out.push_back({{"pair", {r.label_a, r.label_b}}, {"value", r.value}});
  return out;
}

std::vector<RankedPair> ranked_from_json(const Json& j) {
  std::vector<RankedPair> out;
  for (const auto& r : j) {
    out.push_back({r.at("pair").at(0).get<std::string>(), r.at("pair").at(1).get<std::string>(),
                   r.at("value").get<double>()});
  }
  return out;
}

std::vector<RankedPair> rank(const std::vector<const PairMetric*>& pairs, bool by_sc, bool best,
                             std::size_t depth) {
  std::vector<RankedPair> all;
  for (const auto* p : pairs) {
    all.push_back({p->label_a, p->label_b, by_sc ? p->metrics.sc : p->metrics.gsi});
  }
  std::sort(all.begin(), all.end(), [best](const RankedPair& x, const RankedPair& y) {
    if (x.value != y.value) return best ? x.value > y.value : x.value < y.value;
    return std::tie(x.label_a, x.label_b) < std::tie(y.label_a, y.label_b);
  });
  if (all.size() > depth) all.resize(depth);
  return all;
}

}  // namespace

std::string_view report_name(FeatureSet fs) noexcept {
  switch (fs) {
    case FeatureSet::BaselineFunctionals: return "BaselineFunctionals";
    case FeatureSet::PePitch: return "PE_Pitch";
    case FeatureSet::PeLoudness: return "PE_Loudness";
    case FeatureSet::PePitchConcatLoudness: return "PE_PitchConcatLoudness";
    case FeatureSet::PePitchSumLoudness: return "PE_PitchSumLoudness";
  }
  return "?";
}

std::string_view cli_name(FeatureSet fs) noexcept {
  switch (fs) {
    case FeatureSet::BaselineFunctionals: return "baseline";
    case FeatureSet::PePitch: return "pe-pitch";
    case FeatureSet::PeLoudness: return "pe-loudness";
    case FeatureSet::PePitchConcatLoudness: return "pe-concat";
    case FeatureSet::PePitchSumLoudness: return "pe-sum";
  }
  return "?";
}

std::optional<FeatureSet> parse_feature_set(std::string_view name) {
  for (FeatureSet fs : kAllFeatureSets) {
    if (name == report_name(fs) || name == cli_name(fs)) return fs;
  }
  return std::nullopt;
}

ExperimentReport aggregate_report(std::vector<PairMetric> per_pair,
                                  std::vector<PartitionMetric> per_partition, std::size_t depth) {
  if (per_pair.empty() && per_partition.empty()) {
    throw Error(ErrorCode::EmptyResults, "no pair or partition was evaluated");
  }
  std::sort(per_pair.begin(), per_pair.end(), [](const PairMetric& a, const PairMetric& b) {
    return std::tie(a.feature_set, a.label_a, a.label_b) <
           std::tie(b.feature_set, b.label_a, b.label_b);
  });
  std::sort(per_partition.begin(), per_partition.end(),
            [](const PartitionMetric& a, const PartitionMetric& b) {
              return std::tie(a.feature_set, a.partition) < std::tie(b.feature_set, b.partition);
            });

  ExperimentReport report;
  report.mode = per_pair.empty() ? "words" : "pairs";

  std::map<FeatureSet, std::pair<MetricPair, std::size_t>> sums;
  auto accumulate = [&](FeatureSet fs, const MetricPair& m) {
    auto& [sum, count] = sums[fs];
    sum.sc += m.sc;
    sum.gsi += m.gsi;
    ++count;
  };
  if (!per_pair.empty()) {
    for (const auto& p : per_pair) accumulate(p.feature_set, p.metrics);
  } else {
    for (const auto& p : per_partition) accumulate(p.feature_set, p.metrics);
  }
  for (const auto& [fs, acc] : sums) {
    const double n = static_cast<double>(acc.second);
    report.averages[fs] = {acc.first.sc / n, acc.first.gsi / n};
  }

  std::map<FeatureSet, std::vector<const PairMetric*>> by_set;
  for (const auto& p : per_pair) by_set[p.feature_set].push_back(&p);
  for (const auto& [fs, pairs] : by_set) {
    Rankings& r = report.rankings[fs];
    r.best_sc = rank(pairs, true, true, depth);
    r.worst_sc = rank(pairs, true, false, depth);
    r.best_gsi = rank(pairs, false, true, depth);
    r.worst_gsi = rank(pairs, false, false, depth);
  }

  report.per_pair = std::move(per_pair);
  report.per_partition = std::move(per_partition);
  return report;
}

std::string to_json(const ExperimentReport& report) {
  Json j;
  j["mode"] = report.mode;
  Json averages = Json::object();
  for (const auto& [fs, m] : report.averages) {
    averages[std::string(report_name(fs))] = {{"sc", m.sc}, {"gsi", m.gsi}};
  }
  j["averages"] = averages;

  Json pairs = Json::array();
  for (const auto& p : report.per_pair) {
    pairs.push_back({{"feature_set", report_name(p.feature_set)},
                     {"label_a", p.label_a},
                     {"label_b", p.label_b},
                     {"sc", p.metrics.sc},
                     {"gsi", p.metrics.gsi}});
  }
  j["per_pair"] = pairs;

  Json parts = Json::array();
  for (const auto& p : report.per_partition) {
    parts.push_back({{"feature_set", report_name(p.feature_set)},
                     {"partition", p.partition},
                     {"sc", p.metrics.sc},
                     {"gsi", p.metrics.gsi}});
  }
  j["per_partition"] = parts;

  Json rankings = Json::object();
  for (const auto& [fs, r] : report.rankings) {
    rankings[std::string(report_name(fs))] = {
        {"sc", {{"best", ranked_to_json(r.best_sc)}, {"worst", ranked_to_json(r.worst_sc)}}},
        {"gsi", {{"best", ranked_to_json(r.best_gsi)}, {"worst", ranked_to_json(r.worst_gsi)}}}};
  }
  j["rankings"] = rankings;

  Json skipped = Json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"utterance_id", s.utterance_id},
                       {"feature_set", report_name(s.feature_set)},
                       {"reason", s.reason}});
  }
  j["skipped"] = skipped;

  Json aborted = Json::array();
  for (const auto& a : report.aborted) {
    aborted.push_back(
        {{"feature_set", report_name(a.feature_set)}, {"scope", a.scope}, {"reason", a.reason}});
  }
  j["aborted"] = aborted;
  return j.dump(2);
}

ExperimentReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string("report is not valid JSON: ") + e.what());
  }
  ExperimentReport r;
  try {
    r.mode = j.at("mode").get<std::string>();
    for (const auto& [name, m] : j.at("averages").items()) {
      const auto fs = parse_feature_set(name);
      if (!fs) throw Error(ErrorCode::MalformedReport, "unknown feature set " + name);
      r.averages[*fs] = {m.at("sc").get<double>(), m.at("gsi").get<double>()};
    }
    for (const auto& p : j.at("per_pair")) {
      r.per_pair.push_back({p.at("label_a").get<std::string>(), p.at("label_b").get<std::string>(),
                            feature_from_json(p.at("feature_set")),
                            {p.at("sc").get<double>(), p.at("gsi").get<double>()}});
    }
    for (const auto& p : j.at("per_partition")) {
      r.per_partition.push_back({p.at("partition").get<std::string>(),
                                 feature_from_json(p.at("feature_set")),
                                 {p.at("sc").get<double>(), p.at("gsi").get<double>()}});
    }
    for (const auto& [name, rk] : j.at("rankings").items()) {
      const auto fs = parse_feature_set(name);
      if (!fs) throw Error(ErrorCode::MalformedReport, "unknown feature set " + name);
      Rankings& out = r.rankings[*fs];
      out.best_sc = ranked_from_json(rk.at("sc").at("best"));
      out.worst_sc = ranked_from_json(rk.at("sc").at("worst"));
      out.best_gsi = ranked_from_json(rk.at("gsi").at("best"));
      out.worst_gsi = ranked_from_json(rk.at("gsi").at("worst"));
    }
    for (const auto& s : j.at("skipped")) {
      r.skipped.push_back({s.at("utterance_id").get<std::string>(),
                           feature_from_json(s.at("feature_set")),
                           s.at("reason").get<std::string>()});
    }
    for (const auto& a : j.at("aborted")) {
      r.aborted.push_back({feature_from_json(a.at("feature_set")), a.at("scope").get<std::string>(),
                           a.at("reason").get<std::string>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string("report schema: ") + e.what());
  }
  return r;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  const auto old_precision = out.precision(17);
  out << "kind,feature_set,label_a,label_b,partition,sc,gsi\n";
  for (const auto& p : report.per_pair) {
    out << "pair," << report_name(p.feature_set) << ',' << csv::escape(p.label_a) << ','
        << csv::escape(p.label_b) << ",," << p.metrics.sc << ',' << p.metrics.gsi << '\n';
  }
  for (const auto& p : report.per_partition) {
    out << "partition," << report_name(p.feature_set) << ",,," << csv::escape(p.partition) << ','
        << p.metrics.sc << ',' << p.metrics.gsi << '\n';
  }
  for (const auto& [fs, m] : report.averages) {
    out << "average," << report_name(fs) << ",,,," << m.sc << ',' << m.gsi << '\n';
  }
  out.precision(old_precision);
}

}  // namespace peakemb
