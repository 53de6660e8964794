#include "peakemb/error.hpp"

namespace peakemb {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotWav: return "NotWav";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::NoVoicedFrames: return "NoVoicedFrames";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidPointSet: return "InvalidPointSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleLabel: return "SingleLabel";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::PerplexityTooHigh: return "PerplexityTooHigh";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingAudio: return "MissingAudio";
    case ErrorCode::NoPartitions: return "NoPartitions";
    case ErrorCode::SingleClassPartition: return "SingleClassPartition";
    case ErrorCode::EmptyResults: return "EmptyResults";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::MalformedReport: return "MalformedReport";
  }
  return "Unknown";
}

}  // namespace peakemb
