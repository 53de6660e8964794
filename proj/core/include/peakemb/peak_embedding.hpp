#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "peakemb/lld.hpp"

namespace peakemb {

enum class Normalization { MinMax, ZScore };
enum class PitchScope { VoicedOnly, AllFrames };

struct PeConfig {
  std::size_t chunk_count = 10;
  /// Centered moving-average width in frames; must be odd.
  std::size_t smooth_window_frames = 5;
  Normalization normalization = Normalization::MinMax;
  PitchScope pitch_scope = PitchScope::VoicedOnly;
};

void validate(const PeConfig& cfg);

/// Fixed-length vector of per-chunk maxima, chunk_count values per descriptor.
struct PeakEmbedding {
  std::vector<double> values;
  std::vector<std::string> descriptors;
  std::size_t chunk_count = 0;

  std::size_t dimension() const { return values.size(); }
  /// "Pitch", "Pitch;Loudness", "Pitch+Loudness", ...
  std::string descriptor_set() const;
};

/// Centered moving average; the window shrinks to its in-range part at the edges.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

/// Normalize then smooth. For pitch under VoicedOnly the normalization
/// statistics come from voiced frames only and unvoiced frames are pinned to 0
/// before smoothing. Constant populations map to 0.5 (MinMax) or 0 (ZScore).
std::vector<double> preprocess_track(const LldTrack& track, const PeConfig& cfg);

/// Max-pools chunk i over [floor(i*N/K), floor((i+1)*N/K)).
PeakEmbedding peak_embed(std::span<const double> preprocessed, const PeConfig& cfg,
                         const std::string& descriptor);

/// preprocess_track followed by peak_embed.
PeakEmbedding embed_track(const LldTrack& track, const PeConfig& cfg);

enum class CombineMode { Concat, Sum };

PeakEmbedding combine(const PeakEmbedding& a, const PeakEmbedding& b, CombineMode mode);

}  // namespace peakemb
