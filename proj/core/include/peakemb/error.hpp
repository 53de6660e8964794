#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peakemb {

enum class ErrorCode {
  // audio / framing
  NotWav,
  UnsupportedFormat,
  EmptyAudio,
  IoError,
  TooShort,
  InvalidConfig,
  // embedding
  EmptyTrack,
  NoVoicedFrames,
  TooFewFrames,
  ShapeMismatch,
  LengthMismatch,
  // metrics / projection
  InvalidPointSet,
  DimensionMismatch,
  SingleLabel,
  TooFewPoints,
  PerplexityTooHigh,
  // harness
  MalformedManifest,
  DuplicateId,
  MissingAudio,
  NoPartitions,
  SingleClassPartition,
  EmptyResults,
  InvalidProfile,
  MalformedReport,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the harness can classify it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace peakemb
