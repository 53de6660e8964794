#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "peakemb/wav.hpp"

namespace peakemb {

struct FrameConfig {
  double frame_length_ms = 40.0;
  double hop_ms = 10.0;
  double f0_floor_hz = 60.0;
  double f0_ceil_hz = 500.0;
  /// Minimum normalized cross-correlation peak for a frame to count as voiced.
  double voicing_threshold = 0.45;

  std::size_t frame_samples(int sample_rate) const;
  std::size_t hop_samples(int sample_rate) const;
};

/// Throws InvalidConfig unless the lowest pitch period fits twice in a frame.
void validate(const FrameConfig& cfg, int sample_rate);

enum class Descriptor { Pitch, Loudness };

std::string_view to_string(Descriptor d) noexcept;

/// One low-level descriptor sampled at the frame rate. Pitch is in Hz and is 0
/// exactly on unvoiced frames; loudness is in dB.
struct LldTrack {
  Descriptor descriptor = Descriptor::Loudness;
  double hop_s = 0.0;
  /// Time of the first frame's centre; frame i sits at start_s + i * hop_s.
  double start_s = 0.0;
  std::vector<double> values;
  std::vector<bool> voiced;

  std::size_t size() const { return values.size(); }
  double time_of(std::size_t frame) const { return start_s + static_cast<double>(frame) * hop_s; }
  double duration_s() const { return static_cast<double>(values.size()) * hop_s; }
};

using Frame = std::vector<double>;

/// Splits audio into full frames only: floor((n - frame) / hop) + 1 of them.
std::vector<Frame> frame_signal(const AudioBuffer& audio, const FrameConfig& cfg);

/// Normalized cross-correlation pitch tracker. The candidate lag and the
/// voicing decision come from the Hann-windowed frame; the reported lag is then
/// refined on the unwindowed frame within +/-10% of the candidate and
/// parabolically interpolated.
LldTrack estimate_f0(const AudioBuffer& audio, const FrameConfig& cfg);

/// Per-frame RMS level, 20*log10(max(rms, 1e-7)). Voicing flags are all true.
LldTrack estimate_loudness(const AudioBuffer& audio, const FrameConfig& cfg);
/// Same, with voicing flags copied from a pitch track of the same audio.
LldTrack estimate_loudness(const AudioBuffer& audio, const FrameConfig& cfg, const LldTrack& pitch);

inline constexpr double kLoudnessFloorRms = 1e-7;

struct LldPair {
  LldTrack pitch;
  LldTrack loudness;
};

LldPair compute_llds(const AudioBuffer& audio, const FrameConfig& cfg);

/// CSV columns: frame_index,time_s,pitch_hz,voiced,loudness_db
void write_track_csv(std::ostream& out, const LldPair& tracks);

}  // namespace peakemb
