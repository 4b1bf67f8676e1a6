#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace triage::pipeline {

// Records every file a command emitted, with content checksums, so a run
// directory is auditable and two runs can be compared file by file.
// Wall-clock values live only here; data artifacts stay byte-reproducible.
class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::filesystem::path run_dir);

  void add_artifact(const std::filesystem::path& path);
  void add_note(const std::string& key, const std::string& value);

  // Writes manifest_<command>.json inside the run directory.
  std::filesystem::path finish();

 private:
  std::string command_;
  std::filesystem::path run_dir_;
  std::vector<std::filesystem::path> artifacts_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::chrono::steady_clock::time_point started_;
};

// FNV-1a checksum of a file's bytes, hex-encoded.
std::string file_checksum(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::string>& lines);

}  // namespace triage::pipeline
