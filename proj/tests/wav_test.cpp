#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "peakemb/error.hpp"
#include "peakemb/wav.hpp"
#include "test_support.hpp"

namespace peakemb {
namespace {

std::vector<std::uint8_t> header(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                 std::uint16_t bits, std::uint32_t data_bytes) {
  std::vector<std::uint8_t> b;
  auto u16 = [&](std::uint16_t v) { b.push_back(v & 0xFF); b.push_back(v >> 8); };
  auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF); };
  auto tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
  tag("RIFF"); u32(36 + data_bytes); tag("WAVE");
  tag("fmt "); u32(16); u16(format); u16(channels); u32(rate);
  u32(rate * channels * bits / 8); u16(channels * bits / 8); u16(bits);
  tag("data"); u32(data_bytes);
  return b;
}

TEST(Wav, SixteenBitSecondHasSampleRateSamples) {
  AudioBuffer a;
  a.sample_rate = 16000;
  a.samples.assign(16000, 0.25);
  const auto decoded = decode_wav(encode_wav_pcm16(a));
  EXPECT_EQ(decoded.sample_rate, 16000);
  EXPECT_EQ(decoded.samples.size(), 16000u);
}

TEST(Wav, FullScalePositiveMapsTo32767Over32768) {
  auto bytes = header(1, 1, 8000, 16, 8);
  for (int i = 0; i < 4; ++i) { bytes.push_back(0xFF); bytes.push_back(0x7F); }
  const auto a = decode_wav(bytes);
  ASSERT_EQ(a.samples.size(), 4u);
  for (double s : a.samples) EXPECT_DOUBLE_EQ(s, 32767.0 / 32768.0);
}

TEST(Wav, MostNegativeSampleIsMinusOne) {
  auto bytes = header(1, 1, 8000, 16, 2);
  bytes.push_back(0x00);
  bytes.push_back(0x80);
  EXPECT_DOUBLE_EQ(decode_wav(bytes).samples.at(0), -1.0);
}

TEST(Wav, StereoIsUnsupported) {
  auto bytes = header(1, 2, 16000, 16, 8);
  bytes.resize(bytes.size() + 8, 0);
  try {
    decode_wav(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
  }
}

TEST(Wav, RejectsUnsupportedDepthAndCodec) {
  auto pcm24 = header(1, 1, 16000, 24, 6);
  pcm24.resize(pcm24.size() + 6, 0);
  EXPECT_THROW(decode_wav(pcm24), Error);
  auto alaw = header(6, 1, 8000, 8, 4);
  alaw.resize(alaw.size() + 4, 0);
  try {
    decode_wav(alaw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
  }
}

TEST(Wav, BadMagicIsNotWav) {
  std::vector<std::uint8_t> junk(64, 'x');
  try {
    decode_wav(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotWav);
  }
}

TEST(Wav, EmptyDataChunkIsEmptyAudio) {
  try {
    decode_wav(header(1, 1, 16000, 16, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyAudio);
  }
}

TEST(Wav, Float32IsReadAndClamped) {
  auto bytes = header(3, 1, 16000, 32, 12);
  for (float f : {0.5f, -0.25f, 1.5f}) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    for (int i = 0; i < 4; ++i) bytes.push_back((u >> (8 * i)) & 0xFF);
  }
  const auto a = decode_wav(bytes);
  ASSERT_EQ(a.samples.size(), 3u);
  EXPECT_DOUBLE_EQ(a.samples[0], 0.5);
  EXPECT_DOUBLE_EQ(a.samples[1], -0.25);
  EXPECT_DOUBLE_EQ(a.samples[2], 1.0);
}

TEST(Wav, SkipsUnknownChunksBeforeData) {
  AudioBuffer a = testing::sine(440.0, 0.5, 0.01, 8000);
  auto bytes = encode_wav_pcm16(a);
  // Splice a LIST chunk between fmt and data.
  const std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const auto decoded = decode_wav(bytes);
  ASSERT_EQ(decoded.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_NEAR(decoded.samples[i], a.samples[i], 0.5 / 32768.0);
  }
}

TEST(Wav, FileRoundTripWithinQuantization) {
  testing::TempDir dir("wav");
  const auto a = testing::sine(220.0, 0.9, 0.05);
  write_wav_pcm16(dir.path() / "x.wav", a);
  const auto b = load_wav(dir.path() / "x.wav");
  ASSERT_EQ(b.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_NEAR(b.samples[i], a.samples[i], 0.5 / 32768.0);
  }
}

TEST(Wav, MissingFileIsIoError) {
  try {
    load_wav("/nonexistent/peakemb.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

}  // namespace
}  // namespace peakemb
