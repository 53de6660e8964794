#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "peakemb/manifest.hpp"
#include "peakemb/wav.hpp"

namespace peakemb {

/// Recipe for a corpus of rhythm-contrastive synthetic utterances: a sawtooth
/// carrier (continuously voiced) whose amplitude envelope carries one
/// raised-cosine bump per profile position.
struct SynthSpec {
  /// Per class, bump centres as strictly increasing fractions of duration in (0, 1).
  std::vector<std::vector<double>> class_profiles;
  /// Optional class names; defaults to "001", "002", ...
  std::vector<std::string> class_labels;
  /// Optional partition tags; each partition gets n_per_class utterances per class
  /// and its own pitch contour shape.
  std::vector<std::string> partitions;
  std::size_t n_per_class = 50;
  double min_duration_s = 0.9;
  double max_duration_s = 1.71;
  /// Each bump centre moves by up to +/- this fraction of the duration.
  double jitter_frac = 0.03;
  std::uint64_t seed = 42;
  int sample_rate = 16000;
  /// Bump half-width as a fraction of duration, so envelopes scale with tempo.
  double bump_half_width_frac = 0.06;
};

/// Throws InvalidProfile / InvalidConfig for unusable recipes.
void validate(const SynthSpec& spec);

/// One utterance, fully determined by its arguments.
struct SynthUtterance {
  AudioBuffer audio;
  double duration_s = 0.0;
  std::vector<double> peak_times_s;  // bump centres after jitter
};

SynthUtterance synthesize_utterance(const std::vector<double>& profile, double duration_s,
                                    double jitter_frac, double bump_half_width_frac,
                                    std::size_t contour, int sample_rate, std::uint64_t seed);

/// Writes <out_dir>/<utterance_id>.wav plus <out_dir>/manifest.csv and returns
/// the manifest. Identical specs produce identical files.
DatasetManifest synthesize_rhythm_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace peakemb
