#include "peakemb/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

void validate(const AudioBuffer& audio) {
  if (audio.sample_rate <= 0) {
    throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  }
  if (audio.samples.empty()) throw Error(ErrorCode::EmptyAudio, "audio has no samples");
  for (double s : audio.samples) {
    if (!(std::abs(s) <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "sample magnitude exceeds 1");
    }
  }
}

AudioBuffer decode_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
    throw Error(ErrorCode::NotWav, "missing RIFF/WAVE magic");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t size = read_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    // Truncated final chunks are clamped to what is present.
    const std::size_t avail = std::min<std::size_t>(size, b.size() - body);
    if (tag_is(b, pos, "fmt ")) {
      if (avail < 16) throw Error(ErrorCode::NotWav, "fmt chunk too small");
      format = read_u16(b, body);
      channels = read_u16(b, body + 2);
      rate = read_u32(b, body + 4);
      bits = read_u16(b, body + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw Error(ErrorCode::UnsupportedFormat, "extensible fmt chunk too small");
        format = read_u16(b, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(b, pos, "data")) {
      data = b.subspan(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw Error(ErrorCode::NotWav, "no fmt chunk");
  if (!have_data) throw Error(ErrorCode::NotWav, "no data chunk");
  if (channels != 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                "expected mono audio, got " + std::to_string(channels) + " channels");
  }
  if (rate == 0) throw Error(ErrorCode::UnsupportedFormat, "sample rate is zero");

  AudioBuffer audio;
  audio.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data.size() / 2;
    audio.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(read_u16(data, 2 * i));
      audio.samples[i] = v / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data.size() / 4;
    audio.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const float f = std::bit_cast<float>(read_u32(data, 4 * i));
      audio.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
    }
  } else {
    throw Error(ErrorCode::UnsupportedFormat, "format tag " + std::to_string(format) + " with " +
                                                  std::to_string(bits) + " bits per sample");
  }
  if (audio.samples.empty()) throw Error(ErrorCode::EmptyAudio, "data chunk holds no samples");
  return audio;
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : audio.samples) {
    // Same scale as the reader, so a round trip is off by at most half a step.
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, const AudioBuffer& audio) {
  const auto bytes = encode_wav_pcm16(audio);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace peakemb
