#include "peakemb/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "peakemb/csv_io.hpp"
#include "peakemb/error.hpp"

namespace peakemb {

std::vector<std::string> DatasetManifest::groups() const {
  std::set<std::string> s;
  for (const auto& e : entries) s.insert(e.group_label);
  return {s.begin(), s.end()};
}

std::vector<std::string> DatasetManifest::partitions() const {
  std::set<std::string> s;
  for (const auto& e : entries) {
    if (!e.partition_tag.empty()) s.insert(e.partition_tag);
  }
  return {s.begin(), s.end()};
}

void validate(const DatasetManifest& manifest) {
  if (manifest.entries.empty()) throw Error(ErrorCode::MalformedManifest, "manifest is empty");
  std::set<std::string> ids;
  std::map<std::string, std::size_t> group_sizes;
  for (const auto& e : manifest.entries) {
    if (e.utterance_id.empty() || e.group_label.empty() || e.audio_path.empty()) {
      throw Error(ErrorCode::MalformedManifest, "entry with empty audio_path, id or label");
    }
    if (!ids.insert(e.utterance_id).second) {
      throw Error(ErrorCode::DuplicateId, "utterance_id '" + e.utterance_id + "' repeats");
    }
    ++group_sizes[e.group_label];
  }
  for (const auto& [label, count] : group_sizes) {
    if (count < 2) {
      throw Error(ErrorCode::MalformedManifest, "group '" + label + "' has fewer than 2 entries");
    }
  }
}

DatasetManifest load_manifest(const std::filesystem::path& path, bool require_audio) {
  const csv::Table table = csv::read(path);
  const std::vector<std::string> expected = csv::split_line(kManifestHeader);
  if (table.header != expected) {
    throw Error(ErrorCode::MalformedManifest,
                path.string() + ": header must be '" + kManifestHeader + "'");
  }
  const auto base = path.parent_path();
  DatasetManifest m;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto row = table.rows[r];
    // A trailing empty partition_tag may be written without its comma.
    if (row.size() == expected.size() - 1) row.emplace_back();
    if (row.size() != expected.size()) {
      throw Error(ErrorCode::MalformedManifest,
                  path.string() + ":" + std::to_string(table.line_numbers[r]) + ": expected " +
                      std::to_string(expected.size()) + " fields");
    }
    ManifestEntry e;
    e.audio_path = row[0];
    if (e.audio_path.is_relative()) e.audio_path = base / e.audio_path;
    e.utterance_id = row[1];
    e.speaker_id = row[2];
    e.group_label = row[3];
    e.partition_tag = row[4];
    if (require_audio && !std::filesystem::exists(e.audio_path)) {
      throw Error(ErrorCode::MissingAudio, e.audio_path.string());
    }
    m.entries.push_back(std::move(e));
  }
  validate(m);
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  const auto base = path.parent_path().empty() ? std::filesystem::current_path()
                                               : std::filesystem::absolute(path.parent_path());
  out << kManifestHeader << '\n';
  for (const auto& e : manifest.entries) {
    std::filesystem::path audio = e.audio_path;
    if (audio.is_absolute()) {
      const auto rel = audio.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") audio = rel;
    }
    out << csv::escape(audio.generic_string()) << ',' << csv::escape(e.utterance_id) << ','
        << csv::escape(e.speaker_id) << ',' << csv::escape(e.group_label) << ','
        << csv::escape(e.partition_tag) << '\n';
  }
}

}  // namespace peakemb
