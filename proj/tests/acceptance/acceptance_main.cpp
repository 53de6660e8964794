// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "peakemb/cluster_metrics.hpp"
#include "peakemb/error.hpp"
#include "peakemb/harness.hpp"
#include "peakemb/lld.hpp"
#include "peakemb/peak_embedding.hpp"
#include "peakemb/report.hpp"
#include "peakemb/synth.hpp"
#include "peakemb/tsne.hpp"
#include "test_support.hpp"

using namespace peakemb;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && elapsed >= budget_s) {
    out.ok = false;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!out.ok) ++failures;
  std::printf("%s  %-28s %8.3f s", out.ok ? "PASS" : "FAIL", name.c_str(), elapsed);
  if (budget_s > 0.0) std::printf(" (budget %.0f s)", budget_s);
  if (!out.detail.empty()) std::printf("  %s", out.detail.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

unsigned worker_count() { return std::max(2u, std::min(8u, std::thread::hardware_concurrency())); }

LabeledPointSet line(std::vector<double> xs, std::vector<std::string> labels) {
  LabeledPointSet s;
  for (double x : xs) s.points.push_back({x});
  s.labels = std::move(labels);
  return s;
}

LabeledPointSet two_blobs(std::size_t per_blob, std::size_t dim, double gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  LabeledPointSet s;
  for (int blob = 0; blob < 2; ++blob) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      std::vector<double> p(dim);
      for (double& v : p) v = g(rng);
      p[0] += blob * gap;
      s.points.push_back(std::move(p));
      s.labels.push_back(blob == 0 ? "a" : "b");
    }
  }
  return s;
}

Outcome pe_contract() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> len(1, 500);
  std::size_t raised = 0, embedded = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // A tenth of the draws fall below the chunk count to exercise the error path.
    const std::size_t n = trial % 10 == 0 ? 1 + trial % 9 : std::max<std::size_t>(10, len(rng));
    const auto values = testing::random_values(rng, n);
    bool threw = false;
    try {
      const auto pe = embed_track(testing::loudness_track(values), PeConfig{});
      o.check(pe.dimension() == 10, "dimension " + std::to_string(pe.dimension()) + " at length " +
                                        std::to_string(n));
      ++embedded;
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::TooFewFrames;
      ++raised;
    }
    o.check(threw == (n < 10), "TooFewFrames mismatch at length " + std::to_string(n));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(embedded) + " embedded, " +
              std::to_string(raised) + " rejected";
  return o;
}

Outcome tempo_invariance() {
  Outcome o;
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> tens(1, 50);
  // Frame-level smoothing has a fixed width in frames, so the check runs the
  // normalize-and-pool path with smoothing disabled.
  PeConfig cfg;
  cfg.smooth_window_frames = 1;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto base = testing::random_values(rng, 10 * tens(rng));
    const auto ref = embed_track(testing::loudness_track(base), cfg).values;
    for (std::size_t m : {2u, 3u, 5u}) {
      std::vector<double> stretched;
      for (double v : base) stretched.insert(stretched.end(), m, v);
      const auto got = embed_track(testing::loudness_track(stretched, 0.01 / m), cfg).values;
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    }
  }
  o.check(worst <= 1e-9, "max deviation " + std::to_string(worst));
  return o;
}

Outcome gain_invariance() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> len(10, 500);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto values = testing::random_values(rng, len(rng));
    const auto ref = embed_track(testing::loudness_track(values), PeConfig{}).values;
    for (double c : {-20.0, 6.0, 40.0}) {
      auto shifted = values;
      for (double& v : shifted) v += c;
      const auto got = embed_track(testing::loudness_track(shifted), PeConfig{}).values;
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    }
  }
  o.check(worst <= 1e-12, "max deviation " + std::to_string(worst));
  return o;
}

Outcome metric_oracle() {
  Outcome o;
  std::mt19937_64 rng(1004);
  double worst_sc = 0.0, worst_gsi = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = testing::random_instance(rng);
    worst_sc = std::max(worst_sc, std::abs(silhouette_coefficient(set) - testing::oracle::silhouette(set)));
    worst_gsi = std::max(worst_gsi, std::abs(gsi(set) - testing::oracle::gsi(set)));
  }
  o.check(worst_sc <= 1e-9, "SC deviation " + std::to_string(worst_sc));
  o.check(worst_gsi <= 1e-9, "GSI deviation " + std::to_string(worst_gsi));
  return o;
}

Outcome metric_anchors() {
  Outcome o;
  const double sc = silhouette_coefficient(line({0, 0.1, 10, 10.1}, {"A", "A", "B", "B"}));
  const double g1 = gsi(line({0, 1, 10, 11}, {"A", "A", "B", "B"}));
  const double g0 = gsi(line({0, 1, 2, 3}, {"A", "B", "A", "B"}));
  // Outer points score 9.95/10.05 = 0.990050 and inner points 9.85/9.95 =
  // 0.989950; the coefficient is their mean. 0.990050 alone is the outer-point score.
  const double anchor = 0.5 * (9.95 / 10.05 + 9.85 / 9.95);
  o.check(std::abs(sc - anchor) <= 1e-6, "SC " + fmt(sc) + " vs " + fmt(anchor));
  o.check(std::abs(sc - testing::oracle::silhouette(
                            line({0, 0.1, 10, 10.1}, {"A", "A", "B", "B"}))) <= 1e-12,
          "SC disagrees with brute force");
  o.check(std::abs(g1 - 1.0) <= 1e-6, "separated GSI " + fmt(g1));
  o.check(std::abs(g0 - 0.0) <= 1e-6, "alternating GSI " + fmt(g0));
  char buf[96];
  std::snprintf(buf, sizeof buf, "SC=%.8f (outer-point score %.6f)", sc, 9.95 / 10.05);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  return o;
}

Outcome dsp_anchors() {
  Outcome o;
  const auto pitch = estimate_f0(testing::sine(100.0, 0.5, 1.0), FrameConfig{});
  std::size_t good = 0, interior = 0;
  for (std::size_t i = 1; i + 1 < pitch.size(); ++i) {
    ++interior;
    if (pitch.voiced[i] && std::abs(pitch.values[i] - 100.0) <= 2.0) ++good;
  }
  const double frac = static_cast<double>(good) / static_cast<double>(interior);
  o.check(frac >= 0.95, "f0 within 2 Hz on " + fmt(frac));

  const auto quiet = estimate_loudness(testing::sine(220.0, 0.2, 1.0), FrameConfig{});
  const auto loud = estimate_loudness(testing::sine(220.0, 0.4, 1.0), FrameConfig{});
  double worst = 0.0;
  for (std::size_t i = 0; i < quiet.size(); ++i) {
    worst = std::max(worst, std::abs(loud.values[i] - quiet.values[i] - 6.0206));
  }
  o.check(worst <= 0.01, "doubling shift off by " + fmt(worst));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("f0 hit rate ") + fmt(frac);
  return o;
}

Outcome rhythm_separation() {
  Outcome o;
  testing::TempDir dir("acceptance_pairs");
  SynthSpec spec;
  spec.class_profiles = {{0.2, 0.8}, {0.45, 0.55}};
  spec.n_per_class = 50;
  spec.min_duration_s = 0.9;
  spec.max_duration_s = 1.71;
  spec.jitter_frac = 0.03;
  spec.seed = 42;
  const auto m = synthesize_rhythm_corpus(spec, dir.path());
  HarnessConfig cfg;
  cfg.workers = worker_count();
  const std::array<FeatureSet, 2> sets = {FeatureSet::BaselineFunctionals, FeatureSet::PeLoudness};
  const auto r = run_evaluation(m, EvalMode::Pairs, sets, cfg);
  const auto pe = r.averages.at(FeatureSet::PeLoudness);
  const auto base = r.averages.at(FeatureSet::BaselineFunctionals);
  o.check(pe.gsi >= 0.9, "PE_Loudness GSI below 0.9");
  o.check(pe.sc >= 0.3, "PE_Loudness SC below 0.3");
  o.check(base.gsi < pe.gsi, "baseline GSI not below PE_Loudness");
  o.check(base.sc < pe.sc, "baseline SC not below PE_Loudness");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("PE_Loudness SC=") + fmt(pe.sc) +
              " GSI=" + fmt(pe.gsi) + ", Baseline SC=" + fmt(base.sc) + " GSI=" + fmt(base.gsi);
  return o;
}

Outcome word_standin() {
  Outcome o;
  testing::TempDir dir("acceptance_words");
  SynthSpec spec;
  spec.class_profiles = {{0.3, 0.7}, {0.2, 0.5, 0.8}};
  spec.class_labels = {"two_bump", "three_bump"};
  spec.partitions = {"w1", "w2", "w3", "w4"};
  spec.n_per_class = 20;
  spec.seed = 7;
  const auto m = synthesize_rhythm_corpus(spec, dir.path());
  HarnessConfig cfg;
  cfg.workers = worker_count();
  const std::array<FeatureSet, 2> sets = {FeatureSet::BaselineFunctionals, FeatureSet::PeLoudness};
  const auto r = run_evaluation(m, EvalMode::Words, sets, cfg);
  const auto pe = r.averages.at(FeatureSet::PeLoudness);
  const auto base = r.averages.at(FeatureSet::BaselineFunctionals);
  o.check(r.per_partition.size() == 8, "expected 4 partitions per feature set");
  o.check(pe.gsi >= base.gsi, "PE_Loudness average GSI below baseline");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("PE_Loudness GSI=") + fmt(pe.gsi) +
              ", Baseline GSI=" + fmt(base.gsi);
  return o;
}

Outcome tsne_checks() {
  Outcome o;
  const auto set = two_blobs(30, 20, 10.0, 1005);
  TsneConfig cfg;
  const auto aff = compute_affinities(set, cfg.perplexity);
  const double total = std::accumulate(aff.joint.begin(), aff.joint.end(), 0.0);
  o.check(std::abs(total - 1.0) <= 1e-9, "P sums to " + std::to_string(total));
  double worst_h = 0.0;
  for (double h : aff.entropy) worst_h = std::max(worst_h, std::abs(h - std::log(cfg.perplexity)));
  o.check(worst_h <= 1e-4, "log-perplexity off by " + std::to_string(worst_h));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    const auto proj = tsne_project(set, cfg);
    for (std::size_t k = 1; k < proj.kl_trace.size(); ++k) {
      o.check(proj.kl_trace[k].kl <= proj.kl_trace[k - 1].kl + 1e-3,
              "KL rose at iteration " + std::to_string(proj.kl_trace[k].iteration));
    }
    double max_intra = 0.0, min_inter = INFINITY;
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        const double d = std::hypot(proj.coordinates[i][0] - proj.coordinates[j][0],
                                    proj.coordinates[i][1] - proj.coordinates[j][1]);
        if (set.labels[i] == set.labels[j]) max_intra = std::max(max_intra, d);
        else min_inter = std::min(min_inter, d);
      }
    }
    o.check(max_intra < min_inter, "blobs overlap for seed " + std::to_string(seed));
    if (seed == 1) {
      const auto again = tsne_project(set, cfg);
      o.check(again.coordinates == proj.coordinates, "same seed gave different coordinates");
    }
  }
  return o;
}

Outcome report_integrity() {
  Outcome o;
  testing::TempDir dir("acceptance_report");
  SynthSpec spec;
  for (int c = 0; c < 10; ++c) {
    spec.class_profiles.push_back({0.1 + 0.035 * c, 0.5, 0.92 - 0.03 * c});
  }
  spec.n_per_class = 4;
  spec.min_duration_s = 0.6;
  spec.max_duration_s = 0.9;
  const auto m = synthesize_rhythm_corpus(spec, dir.path());
  HarnessConfig serial;
  HarnessConfig parallel;
  parallel.workers = worker_count();
  const auto r1 = run_evaluation(m, EvalMode::Pairs, kAllFeatureSets, serial);
  const auto r2 = run_evaluation(m, EvalMode::Pairs, kAllFeatureSets, parallel);
  for (FeatureSet fs : kAllFeatureSets) {
    const auto n = std::count_if(r1.per_pair.begin(), r1.per_pair.end(),
                                 [&](const PairMetric& p) { return p.feature_set == fs; });
    o.check(n == 45, std::string(report_name(fs)) + " has " + std::to_string(n) + " pairs");
  }
  const auto json = to_json(r1);
  o.check(json == to_json(r2), "reports differ across worker counts");
  const auto back = report_from_json(json);
  const auto again = aggregate_report(back.per_pair, back.per_partition);
  double worst = 0.0;
  for (const auto& [fs, avg] : back.averages) {
    worst = std::max({worst, std::abs(again.averages.at(fs).sc - avg.sc),
                      std::abs(again.averages.at(fs).gsi - avg.gsi)});
  }
  o.check(worst <= 1e-12, "recomputed averages off by " + std::to_string(worst));
  return o;
}

}  // namespace

int main() {
  criterion("pe_contract", 1.0, pe_contract);
  criterion("tempo_invariance", 1.0, tempo_invariance);
  criterion("gain_invariance", 0.0, gain_invariance);
  criterion("metric_oracle_equivalence", 5.0, metric_oracle);
  criterion("metric_closed_form_anchors", 0.0, metric_anchors);
  criterion("dsp_anchors", 0.0, dsp_anchors);
  criterion("synthetic_rhythm_separation", 30.0, rhythm_separation);
  criterion("word_experiment_standin", 30.0, word_standin);
  criterion("tsne", 20.0, tsne_checks);
  criterion("report_integrity", 0.0, report_integrity);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
