#include <gtest/gtest.h>

#include <fstream>

#include "peakemb/error.hpp"
#include "peakemb/manifest.hpp"
#include "test_support.hpp"

namespace peakemb {
namespace {

ErrorCode load_error(const std::filesystem::path& p, bool require_audio = true) {
  try {
    load_manifest(p, require_audio);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(Manifest, ThousandEntriesLoad) {
  testing::TempDir dir("manifest");
  std::string text = std::string(kManifestHeader) + "\n";
  for (int i = 0; i < 1000; ++i) {
    text += "a/u" + std::to_string(i) + ".wav,u" + std::to_string(i) + ",spk" +
            std::to_string(i % 7) + ",g" + std::to_string(i % 10) + ",\n";
  }
  write_text(dir.path() / "m.csv", text);
  const auto m = load_manifest(dir.path() / "m.csv", false);
  EXPECT_EQ(m.entries.size(), 1000u);
  EXPECT_EQ(m.groups().size(), 10u);
  EXPECT_TRUE(m.partitions().empty());
  EXPECT_EQ(m.entries[3].audio_path, dir.path() / "a/u3.wav");
}

TEST(Manifest, PartitionsAndMissingTrailingField) {
  testing::TempDir dir("manifest");
  write_text(dir.path() / "m.csv", std::string(kManifestHeader) +
                                       "\r\n/x/1.wav,1,s,A,w2\r\n/x/2.wav,2,s,A,w1\r\n"
                                       "\n/x/3.wav,3,s,B\r\n/x/4.wav,\"4\",s,B,w1\r\n");
  const auto m = load_manifest(dir.path() / "m.csv", false);
  ASSERT_EQ(m.entries.size(), 4u);
  EXPECT_EQ(m.entries[2].partition_tag, "");
  EXPECT_EQ(m.entries[3].utterance_id, "4");
  EXPECT_EQ(m.partitions(), (std::vector<std::string>{"w1", "w2"}));
}

TEST(Manifest, DuplicateId) {
  testing::TempDir dir("manifest");
  write_text(dir.path() / "m.csv",
             std::string(kManifestHeader) + "\n/a.wav,u1,s,A,\n/b.wav,u1,s,A,\n");
  EXPECT_EQ(load_error(dir.path() / "m.csv", false), ErrorCode::DuplicateId);
}

TEST(Manifest, MissingAudio) {
  testing::TempDir dir("manifest");
  write_text(dir.path() / "m.csv",
             std::string(kManifestHeader) + "\nnope.wav,u1,s,A,\nnope2.wav,u2,s,A,\n");
  EXPECT_EQ(load_error(dir.path() / "m.csv"), ErrorCode::MissingAudio);
}

TEST(Manifest, MalformedHeaderAndRows) {
  testing::TempDir dir("manifest");
  write_text(dir.path() / "h.csv", "path,id,speaker,label,partition\n/a.wav,u1,s,A,\n");
  EXPECT_EQ(load_error(dir.path() / "h.csv", false), ErrorCode::MalformedManifest);
  write_text(dir.path() / "r.csv", std::string(kManifestHeader) + "\n/a.wav,u1\n");
  EXPECT_EQ(load_error(dir.path() / "r.csv", false), ErrorCode::MalformedManifest);
  write_text(dir.path() / "e.csv", std::string(kManifestHeader) + "\n");
  EXPECT_EQ(load_error(dir.path() / "e.csv", false), ErrorCode::MalformedManifest);
}

TEST(Manifest, GroupNeedsTwoEntries) {
  testing::TempDir dir("manifest");
  write_text(dir.path() / "m.csv", std::string(kManifestHeader) +
                                       "\n/a.wav,u1,s,A,\n/b.wav,u2,s,A,\n/c.wav,u3,s,B,\n");
  EXPECT_EQ(load_error(dir.path() / "m.csv", false), ErrorCode::MalformedManifest);
}

TEST(Manifest, MissingFileIsIoError) {
  EXPECT_EQ(load_error("/definitely/not/here.csv"), ErrorCode::IoError);
}

TEST(Manifest, WriteThenLoadRoundTrip) {
  testing::TempDir dir("manifest");
  DatasetManifest m;
  m.entries = {{dir.path() / "audio" / "x,1.wav", "x,1", "s1", "A", "p"},
               {dir.path() / "audio" / "x2.wav", "x2", "s1", "A", "p"},
               {"/elsewhere/y.wav", "y", "", "B", ""},
               {"/elsewhere/z.wav", "z", "", "B", ""}};
  write_manifest(dir.path() / "m.csv", m);
  const auto back = load_manifest(dir.path() / "m.csv", false);
  ASSERT_EQ(back.entries.size(), m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].audio_path.lexically_normal(), m.entries[i].audio_path);
    EXPECT_EQ(back.entries[i].utterance_id, m.entries[i].utterance_id);
    EXPECT_EQ(back.entries[i].speaker_id, m.entries[i].speaker_id);
    EXPECT_EQ(back.entries[i].group_label, m.entries[i].group_label);
    EXPECT_EQ(back.entries[i].partition_tag, m.entries[i].partition_tag);
  }
}

}  // namespace
}  // namespace peakemb
