#include "peakemb/peak_embedding.hpp"

#include <algorithm>
#include <cmath>

#include "peakemb/error.hpp"

namespace peakemb {

void validate(const PeConfig& cfg) {
  if (cfg.chunk_count < 1) throw Error(ErrorCode::InvalidConfig, "chunk_count must be >= 1");
  if (cfg.smooth_window_frames < 1 || cfg.smooth_window_frames % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "smooth_window_frames must be odd and >= 1");
  }
}

std::string PeakEmbedding::descriptor_set() const {
  std::string out;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (i > 0) out += ';';
    out += descriptors[i];
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  const std::size_t n = values.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> preprocess_track(const LldTrack& track, const PeConfig& cfg) {
  validate(cfg);
  const std::size_t n = track.values.size();
  if (n == 0) throw Error(ErrorCode::EmptyTrack, "track has no frames");
  if (track.voiced.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "voicing flags do not match track length");
  }

  const bool voiced_only =
      track.descriptor == Descriptor::Pitch && cfg.pitch_scope == PitchScope::VoicedOnly;
  auto in_population = [&](std::size_t i) { return !voiced_only || track.voiced[i]; };

  std::size_t count = 0;
  double lo = 0.0, hi = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_population(i)) continue;
    const double v = track.values[i];
    if (count == 0) lo = hi = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::NoVoicedFrames, "pitch track has no voiced frames");

  std::vector<double> norm(n, 0.0);
  if (cfg.normalization == Normalization::MinMax) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_population(i)) continue;
      norm[i] = range > 0.0 ? (track.values[i] - lo) / range : 0.5;
    }
  } else {
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_population(i)) var += (track.values[i] - mean) * (track.values[i] - mean);
    }
    const double sd = std::sqrt(var / static_cast<double>(count));
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_population(i)) continue;
      norm[i] = sd > 0.0 ? (track.values[i] - mean) / sd : 0.0;
    }
  }
  return moving_average(norm, cfg.smooth_window_frames);
}

PeakEmbedding peak_embed(std::span<const double> preprocessed, const PeConfig& cfg,
                         const std::string& descriptor) {
  validate(cfg);
  const std::size_t n = preprocessed.size();
  const std::size_t k = cfg.chunk_count;
  if (n < k) {
    throw Error(ErrorCode::TooFewFrames,
                std::to_string(n) + " frames cannot fill " + std::to_string(k) + " chunks");
  }
  PeakEmbedding pe;
  pe.chunk_count = k;
  pe.descriptors = {descriptor};
  pe.values.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t begin = i * n / k;
    const std::size_t end = (i + 1) * n / k;
    pe.values[i] = *std::max_element(preprocessed.begin() + static_cast<std::ptrdiff_t>(begin),
                                     preprocessed.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return pe;
}

PeakEmbedding embed_track(const LldTrack& track, const PeConfig& cfg) {
  const auto pre = preprocess_track(track, cfg);
  return peak_embed(pre, cfg, std::string(to_string(track.descriptor)));
}

PeakEmbedding combine(const PeakEmbedding& a, const PeakEmbedding& b, CombineMode mode) {
  if (a.chunk_count != b.chunk_count) {
    throw Error(ErrorCode::ShapeMismatch, "chunk counts differ");
  }
  PeakEmbedding out;
  out.chunk_count = a.chunk_count;
  if (mode == CombineMode::Concat) {
    out.values = a.values;
    out.values.insert(out.values.end(), b.values.begin(), b.values.end());
    out.descriptors = a.descriptors;
    out.descriptors.insert(out.descriptors.end(), b.descriptors.begin(), b.descriptors.end());
    return out;
  }
  if (a.descriptors.size() != b.descriptors.size() || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::ShapeMismatch, "sum needs equal descriptor counts");
  }
  out.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  for (std::size_t i = 0; i < a.descriptors.size(); ++i) {
    out.descriptors.push_back(a.descriptors[i] + "+" + b.descriptors[i]);
  }
  return out;
}

}  // namespace peakemb
