#include "peakemb/lld.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

std::size_t ms_to_samples(double ms, int sample_rate) {
  return static_cast<std::size_t>(std::llround(ms * sample_rate / 1000.0));
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n - 1));
  }
  return w;
}

// Normalized cross-correlation between x[0, n-lag) and x[lag, n).
double nccf(const std::vector<double>& x, std::size_t lag) {
  const std::size_t n = x.size();
  if (lag >= n) return 0.0;
  double num = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) {
    const double a = x[i];
    const double b = x[i + lag];
    num += a * b;
    e0 += a * a;
    e1 += b * b;
  }
  const double den = std::sqrt(e0 * e1);
  return den > 0.0 ? num / den : 0.0;
}

struct LagRange {
  std::size_t lo;
  std::size_t hi;
};

LagRange lag_range(const FrameConfig& cfg, int sample_rate, std::size_t frame_len) {
  const auto lo = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(sample_rate / cfg.f0_ceil_hz)));
  auto hi = static_cast<std::size_t>(std::ceil(sample_rate / cfg.f0_floor_hz));
  hi = std::min(hi, frame_len - 2);
  return {lo, std::max(lo, hi)};
}

template <typename Fn>
std::size_t argmax_lag(std::size_t lo, std::size_t hi, Fn&& score, double& best) {
  std::size_t best_lag = lo;
  best = -2.0;
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const double r = score(lag);
    if (r > best) {
      best = r;
      best_lag = lag;
    }
  }
  return best_lag;
}

LldTrack make_track(Descriptor d, const AudioBuffer& audio, const FrameConfig& cfg,
                    std::size_t frames) {
  LldTrack t;
  t.descriptor = d;
  t.hop_s = static_cast<double>(cfg.hop_samples(audio.sample_rate)) / audio.sample_rate;
  t.start_s = 0.5 * static_cast<double>(cfg.frame_samples(audio.sample_rate)) / audio.sample_rate;
  t.values.assign(frames, 0.0);
  t.voiced.assign(frames, false);
  return t;
}

}  // namespace

std::size_t FrameConfig::frame_samples(int sample_rate) const {
  return ms_to_samples(frame_length_ms, sample_rate);
}

std::size_t FrameConfig::hop_samples(int sample_rate) const {
  return ms_to_samples(hop_ms, sample_rate);
}

void validate(const FrameConfig& cfg, int sample_rate) {
  if (sample_rate <= 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  if (!(cfg.frame_length_ms > 0.0) || !(cfg.hop_ms > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "frame length and hop must be positive");
  }
  if (cfg.hop_ms > cfg.frame_length_ms) {
    throw Error(ErrorCode::InvalidConfig, "hop exceeds frame length");
  }
  if (!(cfg.f0_floor_hz > 0.0) || !(cfg.f0_floor_hz < cfg.f0_ceil_hz)) {
    throw Error(ErrorCode::InvalidConfig, "require 0 < f0_floor_hz < f0_ceil_hz");
  }
  if (!(cfg.voicing_threshold > 0.0 && cfg.voicing_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "voicing_threshold must lie in (0, 1)");
  }
  if (cfg.hop_samples(sample_rate) == 0) {
    throw Error(ErrorCode::InvalidConfig, "hop is shorter than one sample");
  }
  const double min_frame = 2.0 * sample_rate / cfg.f0_floor_hz;
  if (static_cast<double>(cfg.frame_samples(sample_rate)) < min_frame) {
    throw Error(ErrorCode::InvalidConfig,
                "frame must hold two periods of f0_floor_hz (" + std::to_string(min_frame) +
                    " samples)");
  }
}

std::string_view to_string(Descriptor d) noexcept {
  return d == Descriptor::Pitch ? "Pitch" : "Loudness";
}

std::vector<Frame> frame_signal(const AudioBuffer& audio, const FrameConfig& cfg) {
  validate(cfg, audio.sample_rate);
  const std::size_t len = cfg.frame_samples(audio.sample_rate);
  const std::size_t hop = cfg.hop_samples(audio.sample_rate);
  const std::size_t n = audio.samples.size();
  if (n < len) {
    throw Error(ErrorCode::TooShort, std::to_string(n) + " samples is shorter than one frame (" +
                                         std::to_string(len) + ")");
  }
  const std::size_t count = (n - len) / hop + 1;
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const auto first = audio.samples.begin() + static_cast<std::ptrdiff_t>(f * hop);
    frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(len));
  }
  return frames;
}

LldTrack estimate_f0(const AudioBuffer& audio, const FrameConfig& cfg) {
  const auto frames = frame_signal(audio, cfg);
  const int sr = audio.sample_rate;
  const std::size_t len = frames.front().size();
  const auto window = hann(len);
  const auto [lag_lo, lag_hi] = lag_range(cfg, sr, len);

  LldTrack track = make_track(Descriptor::Pitch, audio, cfg, frames.size());
  std::vector<double> windowed(len);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const Frame& raw = frames[f];
    for (std::size_t i = 0; i < len; ++i) windowed[i] = raw[i] * window[i];

    double peak = 0.0;
    const std::size_t candidate =
        argmax_lag(lag_lo, lag_hi, [&](std::size_t lag) { return nccf(windowed, lag); }, peak);
    if (!(peak >= cfg.voicing_threshold)) continue;

    const auto lo = std::max(lag_lo, static_cast<std::size_t>(std::floor(0.9 * candidate)));
    const auto hi = std::min(lag_hi, static_cast<std::size_t>(std::ceil(1.1 * candidate)));
    double refined_peak = 0.0;
    const std::size_t lag =
        argmax_lag(lo, hi, [&](std::size_t l) { return nccf(raw, l); }, refined_peak);

    double offset = 0.0;
    if (lag > 1 && lag + 1 < len) {
      const double left = nccf(raw, lag - 1);
      const double right = nccf(raw, lag + 1);
      const double curvature = left - 2.0 * refined_peak + right;
      if (curvature < 0.0) offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
    }
    const double f0 = sr / (static_cast<double>(lag) + offset);
    track.values[f] = std::clamp(f0, cfg.f0_floor_hz, cfg.f0_ceil_hz);
    track.voiced[f] = true;
  }
  return track;
}

LldTrack estimate_loudness(const AudioBuffer& audio, const FrameConfig& cfg) {
  const auto frames = frame_signal(audio, cfg);
  LldTrack track = make_track(Descriptor::Loudness, audio, cfg, frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    double energy = 0.0;
    for (double s : frames[f]) energy += s * s;
    const double rms = std::sqrt(energy / static_cast<double>(frames[f].size()));
    track.values[f] = 20.0 * std::log10(std::max(rms, kLoudnessFloorRms));
    track.voiced[f] = true;
  }
  return track;
}

LldTrack estimate_loudness(const AudioBuffer& audio, const FrameConfig& cfg,
                           const LldTrack& pitch) {
  LldTrack track = estimate_loudness(audio, cfg);
  if (pitch.size() != track.size()) {
    throw Error(ErrorCode::LengthMismatch, "pitch track does not match loudness frame count");
  }
  track.voiced = pitch.voiced;
  return track;
}

LldPair compute_llds(const AudioBuffer& audio, const FrameConfig& cfg) {
  validate(audio);
  LldPair out;
  out.pitch = estimate_f0(audio, cfg);
  out.loudness = estimate_loudness(audio, cfg, out.pitch);
  return out;
}

void write_track_csv(std::ostream& out, const LldPair& tracks) {
  if (tracks.pitch.size() != tracks.loudness.size()) {
    throw Error(ErrorCode::LengthMismatch, "pitch and loudness tracks differ in length");
  }
  out << "frame_index,time_s,pitch_hz,voiced,loudness_db\n";
  const auto old_precision = out.precision(10);
  for (std::size_t i = 0; i < tracks.pitch.size(); ++i) {
    out << i << ',' << tracks.pitch.time_of(i) << ',' << tracks.pitch.values[i] << ','
        << (tracks.pitch.voiced[i] ? 1 : 0) << ',' << tracks.loudness.values[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace peakemb
