#include <gtest/gtest.h>

#include "peakemb/config.hpp"
#include "peakemb/error.hpp"

namespace peakemb {
namespace {

TEST(Config, ParsesCommentsAndWhitespace) {
  const auto kv = parse_key_values("# header\n  chunk_count = 8  # inline\n\nseed=3\r\n");
  EXPECT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("chunk_count"), "8");
  EXPECT_EQ(kv.at("seed"), "3");
}

TEST(Config, AppliesEveryKey) {
  HarnessConfig h;
  TsneConfig t;
  apply_config(parse_key_values(R"(
frame_length_ms = 30
hop_ms = 5
f0_floor_hz = 70
f0_ceil_hz = 400
voicing_threshold = 0.5
chunk_count = 12
smooth_window_frames = 3
normalization = zscore
pitch_scope = all
peak_smooth_window = 7
peak_threshold_db = 2.5
peak_min_separation_s = 0.05
skip_threshold = 0.2
workers = 4
standardize = true
perplexity = 9
iterations = 500
learning_rate = 50
early_exaggeration = 12
seed = 17
)"),
               h, t);
  EXPECT_EQ(h.frame.frame_length_ms, 30.0);
  EXPECT_EQ(h.frame.hop_ms, 5.0);
  EXPECT_EQ(h.frame.f0_floor_hz, 70.0);
  EXPECT_EQ(h.frame.f0_ceil_hz, 400.0);
  EXPECT_EQ(h.frame.voicing_threshold, 0.5);
  EXPECT_EQ(h.pe.chunk_count, 12u);
  EXPECT_EQ(h.pe.smooth_window_frames, 3u);
  EXPECT_EQ(h.pe.normalization, Normalization::ZScore);
  EXPECT_EQ(h.pe.pitch_scope, PitchScope::AllFrames);
  EXPECT_EQ(h.peaks.smooth_window_frames, 7u);
  EXPECT_EQ(h.peaks.threshold_db, 2.5);
  EXPECT_EQ(h.peaks.min_separation_s, 0.05);
  EXPECT_EQ(h.skip_threshold, 0.2);
  EXPECT_EQ(h.workers, 4u);
  EXPECT_TRUE(h.standardize);
  EXPECT_EQ(t.perplexity, 9.0);
  EXPECT_EQ(t.iterations, 500);
  EXPECT_EQ(t.learning_rate, 50.0);
  EXPECT_EQ(t.early_exaggeration, 12.0);
  EXPECT_EQ(t.seed, 17u);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {"nonsense", "bogus_key = 1", "chunk_count = -3", "hop_ms = ten",
                           "normalization = l2", "standardize = maybe", "seed = 1.5"}) {
    HarnessConfig h;
    TsneConfig t;
    try {
      apply_config(parse_key_values(text), h, t);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << text;
    }
  }
}

}  // namespace
}  // namespace peakemb
