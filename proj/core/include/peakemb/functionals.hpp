#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "peakemb/lld.hpp"

namespace peakemb {

/// The six temporal baseline features, one global value each per utterance.
struct TemporalFunctionals {
  double loudness_peak_rate = 0.0;    // peaks/s
  double voiced_len_mean = 0.0;       // s
  double voiced_len_std = 0.0;        // s
  double unvoiced_len_mean = 0.0;     // s
  double unvoiced_len_std = 0.0;      // s
  double pseudo_syllable_rate = 0.0;  // voiced regions/s

  std::array<double, 6> as_array() const {
    return {loudness_peak_rate, voiced_len_mean,   voiced_len_std,
            unvoiced_len_mean,  unvoiced_len_std,  pseudo_syllable_rate};
  }
};

struct PeakPickConfig {
  std::size_t smooth_window_frames = 5;
  /// Peaks must exceed the track mean by this many dB.
  double threshold_db = 1.0;
  double min_separation_s = 0.100;
};

struct RegionDurations {
  std::vector<double> voiced;
  std::vector<double> unvoiced;
};

/// Maximal runs of voiced / unvoiced frames, in seconds (run length * hop).
RegionDurations segment_voiced_regions(const LldTrack& track);

/// Frame indices of loudness peaks: local maxima of the smoothed track above
/// mean + threshold, greedily thinned so kept peaks are >= min_separation apart
/// (larger value wins; earlier frame wins exact ties). Returned ascending.
std::vector<std::size_t> pick_loudness_peaks(const LldTrack& loudness, const PeakPickConfig& cfg);

TemporalFunctionals compute_functionals(const LldTrack& pitch, const LldTrack& loudness,
                                        const PeakPickConfig& cfg = {});

}  // namespace peakemb
