#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "peakemb/harness.hpp"
#include "peakemb/tsne.hpp"

namespace peakemb {

/// Parsed `key = value` lines; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Applies recognised keys, throwing InvalidConfig on unknown keys or bad values.
///   frame_length_ms hop_ms f0_floor_hz f0_ceil_hz voicing_threshold
///   chunk_count smooth_window_frames normalization(minmax|zscore)
///   pitch_scope(voiced|all) peak_smooth_window peak_threshold_db
///   peak_min_separation_s skip_threshold workers standardize(true|false)
///   perplexity iterations learning_rate early_exaggeration seed
void apply_config(const KeyValues& kv, HarnessConfig& harness, TsneConfig& tsne);

}  // namespace peakemb
