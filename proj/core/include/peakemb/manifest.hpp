#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace peakemb {

struct ManifestEntry {
  std::filesystem::path audio_path;
  std::string utterance_id;
  std::string speaker_id;
  std::string group_label;
  std::string partition_tag;  // empty when the entry has no partition
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  /// Distinct group labels, sorted.
  std::vector<std::string> groups() const;
  /// Distinct non-empty partition tags, sorted.
  std::vector<std::string> partitions() const;
};

inline constexpr const char* kManifestHeader =
    "audio_path,utterance_id,speaker_id,group_label,partition_tag";

/// Parses a manifest CSV. Relative audio paths resolve against the manifest's
/// directory. Throws MalformedManifest, DuplicateId or MissingAudio.
DatasetManifest load_manifest(const std::filesystem::path& path, bool require_audio = true);

/// Checks unique ids and that every group has at least two entries.
void validate(const DatasetManifest& manifest);

/// Writes audio paths relative to the manifest's directory when possible.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

}  // namespace peakemb
