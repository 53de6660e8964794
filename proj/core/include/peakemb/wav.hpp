#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace peakemb {

/// Mono audio with samples normalized to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Throws EmptyAudio / InvalidConfig when the buffer breaks its invariants.
void validate(const AudioBuffer& audio);

/// Reads a RIFF/WAVE file holding mono 16-bit PCM or 32-bit IEEE float
/// samples. WAVE_FORMAT_EXTENSIBLE headers are accepted when their subformat
/// is one of those two.
AudioBuffer load_wav(const std::filesystem::path& path);
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);

/// 16-bit PCM encoder; samples are clipped to [-1, 1] and rounded.
std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& audio);
void write_wav_pcm16(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace peakemb
