#include "peakemb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

constexpr double kBaseLevel = 0.08;
constexpr double kBumpLevel = 0.4;
constexpr double kNoiseLevel = 0.002;

std::uint64_t mix_seed(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Relative f0 multiplier at normalized time u for a contour shape.
double contour_factor(std::size_t contour, double u) {
  switch (contour % 4) {
    case 0: return 1.0 - 0.12 * u;                        // gentle declination
    case 1: return 0.9 + 0.35 * u * u;                     // final rise
    case 2: return 1.0 + 0.25 * std::sin(std::numbers::pi * u);  // rise-fall
    default: return 1.15 - 0.3 * u;                        // steep fall
  }
}

std::string default_label(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i + 1);
  return buf;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.class_profiles.size() < 1) throw Error(ErrorCode::InvalidProfile, "no class profiles");
  for (const auto& profile : spec.class_profiles) {
    if (profile.empty()) throw Error(ErrorCode::InvalidProfile, "empty profile");
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (!(profile[i] > 0.0 && profile[i] < 1.0)) {
        throw Error(ErrorCode::InvalidProfile, "peak positions must lie in (0, 1)");
      }
      if (i > 0 && !(profile[i] > profile[i - 1])) {
        throw Error(ErrorCode::InvalidProfile, "peak positions must be strictly increasing");
      }
    }
  }
  if (!spec.class_labels.empty() && spec.class_labels.size() != spec.class_profiles.size()) {
    throw Error(ErrorCode::InvalidProfile, "one label per class profile is required");
  }
  if (spec.n_per_class < 2) throw Error(ErrorCode::InvalidProfile, "n_per_class must be >= 2");
  if (!(spec.min_duration_s > 0.0) || spec.max_duration_s < spec.min_duration_s) {
    throw Error(ErrorCode::InvalidConfig, "invalid duration range");
  }
  if (!(spec.jitter_frac >= 0.0 && spec.jitter_frac < 0.5)) {
    throw Error(ErrorCode::InvalidConfig, "jitter_frac must lie in [0, 0.5)");
  }
  if (spec.sample_rate <= 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  if (!(spec.bump_half_width_frac > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "bump width must be positive");
  }
}

SynthUtterance synthesize_utterance(const std::vector<double>& profile, double duration_s,
                                    double jitter_frac, double bump_half_width_frac,
                                    std::size_t contour, int sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed));
  const double f0_base = uniform(rng, 100.0, 180.0);
  const double gain = uniform(rng, 0.6, 1.0);

  SynthUtterance out;
  out.duration_s = duration_s;
  std::vector<double> bump_gain;
  for (double pos : profile) {
    const double jitter = jitter_frac > 0.0 ? uniform(rng, -jitter_frac, jitter_frac) : 0.0;
    const double p = std::clamp(pos + jitter, 0.01, 0.99);
    out.peak_times_s.push_back(p * duration_s);
    bump_gain.push_back(uniform(rng, 0.85, 1.15));
  }

  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  const double half_width = bump_half_width_frac * duration_s;
  out.audio.sample_rate = sample_rate;
  out.audio.samples.resize(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double env = kBaseLevel;
    for (std::size_t k = 0; k < out.peak_times_s.size(); ++k) {
      const double u = (t - out.peak_times_s[k]) / half_width;
      if (std::abs(u) < 1.0) env += kBumpLevel * bump_gain[k] * 0.5 * (1.0 + std::cos(std::numbers::pi * u));
    }
    const double f0 = f0_base * contour_factor(contour, t / duration_s);
    phase += f0 / sample_rate;
    phase -= std::floor(phase);
    const double carrier = 2.0 * phase - 1.0;
    const double noise = uniform(rng, -kNoiseLevel, kNoiseLevel);
    out.audio.samples[i] = std::clamp(gain * env * carrier + noise, -1.0, 1.0);
  }
  return out;
}

DatasetManifest synthesize_rhythm_corpus(const SynthSpec& spec,
                                         const std::filesystem::path& out_dir) {
  validate(spec);
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> partitions = spec.partitions;
  const bool partitioned = !partitions.empty();
  if (!partitioned) partitions.emplace_back();

  DatasetManifest manifest;
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    for (std::size_t c = 0; c < spec.class_profiles.size(); ++c) {
      const std::string label =
          spec.class_labels.empty() ? default_label(c) : spec.class_labels[c];
      for (std::size_t u = 0; u < spec.n_per_class; ++u) {
        const std::uint64_t utt_seed =
            mix_seed(spec.seed ^ mix_seed((p << 40) ^ (c << 20) ^ u));
        std::mt19937_64 dur_rng(utt_seed);
        const double duration = uniform(dur_rng, spec.min_duration_s, spec.max_duration_s);
        const auto utt = synthesize_utterance(spec.class_profiles[c], duration, spec.jitter_frac,
                                              spec.bump_half_width_frac, partitioned ? p : 0,
                                              spec.sample_rate, utt_seed + 1);

        char speaker[16];
        std::snprintf(speaker, sizeof speaker, "s%03zu", u + 1);
        std::string id = (partitioned ? partitions[p] + "_" : std::string()) + label + "_" + speaker;
        const auto wav = std::filesystem::absolute(out_dir) / (id + ".wav");
        write_wav_pcm16(wav, utt.audio);
        manifest.entries.push_back({wav, id, speaker, label, partitions[p]});
      }
    }
  }
  validate(manifest);
  write_manifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

}  // namespace peakemb
