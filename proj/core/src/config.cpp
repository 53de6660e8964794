#include "peakemb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw Error(ErrorCode::InvalidConfig, key + ": '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidConfig, key + ": '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidConfig, key + ": '" + v + "' is not a boolean");
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

void apply_config(const KeyValues& kv, HarnessConfig& h, TsneConfig& t) {
  for (const auto& [key, value] : kv) {
    if (key == "frame_length_ms") h.frame.frame_length_ms = to_double(key, value);
    else if (key == "hop_ms") h.frame.hop_ms = to_double(key, value);
    else if (key == "f0_floor_hz") h.frame.f0_floor_hz = to_double(key, value);
    else if (key == "f0_ceil_hz") h.frame.f0_ceil_hz = to_double(key, value);
    else if (key == "voicing_threshold") h.frame.voicing_threshold = to_double(key, value);
    else if (key == "chunk_count") h.pe.chunk_count = to_unsigned(key, value);
    else if (key == "smooth_window_frames") h.pe.smooth_window_frames = to_unsigned(key, value);
    else if (key == "normalization") {
      if (value == "minmax") h.pe.normalization = Normalization::MinMax;
      else if (value == "zscore") h.pe.normalization = Normalization::ZScore;
      else throw Error(ErrorCode::InvalidConfig, "normalization must be minmax or zscore");
    } else if (key == "pitch_scope") {
      if (value == "voiced") h.pe.pitch_scope = PitchScope::VoicedOnly;
      else if (value == "all") h.pe.pitch_scope = PitchScope::AllFrames;
      else throw Error(ErrorCode::InvalidConfig, "pitch_scope must be voiced or all");
    } else if (key == "peak_smooth_window") h.peaks.smooth_window_frames = to_unsigned(key, value);
    else if (key == "peak_threshold_db") h.peaks.threshold_db = to_double(key, value);
    else if (key == "peak_min_separation_s") h.peaks.min_separation_s = to_double(key, value);
    else if (key == "skip_threshold") h.skip_threshold = to_double(key, value);
    else if (key == "workers") h.workers = static_cast<unsigned>(to_unsigned(key, value));
    else if (key == "standardize") h.standardize = to_bool(key, value);
    else if (key == "perplexity") t.perplexity = to_double(key, value);
    else if (key == "iterations") t.iterations = static_cast<int>(to_unsigned(key, value));
    else if (key == "learning_rate") t.learning_rate = to_double(key, value);
    else if (key == "early_exaggeration") t.early_exaggeration = to_double(key, value);
    else if (key == "seed") t.seed = to_unsigned(key, value);
    else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
  }
}

}  // namespace peakemb
