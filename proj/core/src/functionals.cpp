#include "peakemb/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakemb/error.hpp"
#include "peakemb/peak_embedding.hpp"

namespace peakemb {
namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd population_stats(const std::vector<double>& v) {
  if (v.empty()) return {};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

RegionDurations segment_voiced_regions(const LldTrack& track) {
  const std::size_t n = track.voiced.size();
  if (n == 0) throw Error(ErrorCode::EmptyTrack, "track has no frames");
  RegionDurations out;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || track.voiced[i] != track.voiced[run_start]) {
      const double dur = static_cast<double>(i - run_start) * track.hop_s;
      (track.voiced[run_start] ? out.voiced : out.unvoiced).push_back(dur);
      run_start = i;
    }
  }
  return out;
}

std::vector<std::size_t> pick_loudness_peaks(const LldTrack& loudness, const PeakPickConfig& cfg) {
  const std::size_t n = loudness.values.size();
  if (n == 0) throw Error(ErrorCode::EmptyTrack, "loudness track has no frames");
  if (cfg.smooth_window_frames < 1 || cfg.smooth_window_frames % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "peak smoothing window must be odd and >= 1");
  }
  const auto smooth = moving_average(loudness.values, cfg.smooth_window_frames);
  const double mean = std::accumulate(smooth.begin(), smooth.end(), 0.0) / static_cast<double>(n);
  const double threshold = mean + cfg.threshold_db;

  // Plateaus count once, at their first frame.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1] && smooth[i] > threshold) {
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return smooth[a] > smooth[b]; });

  std::vector<std::size_t> kept;
  for (std::size_t c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      const double gap = std::abs(static_cast<double>(c) - static_cast<double>(k)) * loudness.hop_s;
      return gap >= cfg.min_separation_s - 1e-9;
    });
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

TemporalFunctionals compute_functionals(const LldTrack& pitch, const LldTrack& loudness,
                                        const PeakPickConfig& cfg) {
  if (pitch.size() == 0 || loudness.size() == 0) {
    throw Error(ErrorCode::EmptyTrack, "functionals need non-empty tracks");
  }
  if (pitch.size() != loudness.size()) {
    throw Error(ErrorCode::LengthMismatch, "pitch and loudness tracks differ in length");
  }
  const double duration = pitch.duration_s();
  const auto regions = segment_voiced_regions(pitch);
  const auto voiced = population_stats(regions.voiced);
  const auto unvoiced = population_stats(regions.unvoiced);

  TemporalFunctionals f;
  f.loudness_peak_rate = static_cast<double>(pick_loudness_peaks(loudness, cfg).size()) / duration;
  f.voiced_len_mean = voiced.mean;
  f.voiced_len_std = voiced.std;
  f.unvoiced_len_mean = unvoiced.mean;
  f.unvoiced_len_std = unvoiced.std;
  f.pseudo_syllable_rate = static_cast<double>(regions.voiced.size()) / duration;
  return f;
}

}  // namespace peakemb
