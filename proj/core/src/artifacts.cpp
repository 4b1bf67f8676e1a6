#include "triage/pipeline/artifacts.hpp"

#include <chrono>

#include "jsonio.hpp"
#include "triage/common.hpp"
#include "triage/version.hpp"

namespace triage::pipeline {

using jsonio::json;

std::string file_checksum(const std::filesystem::path& path) {
  return to_hex(fnv1a64(jsonio::read_text_file(path)));
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::string>& lines) {
  std::string text = header + "\n";
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  jsonio::write_text_file(path, text);
}

ManifestWriter::ManifestWriter(std::string command, std::filesystem::path run_dir)
    : command_(std::move(command)),
      run_dir_(std::move(run_dir)),
      started_(std::chrono::steady_clock::now()) {}

void ManifestWriter::add_artifact(const std::filesystem::path& path) {
  artifacts_.push_back(path);
}

void ManifestWriter::add_note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

std::filesystem::path ManifestWriter::finish() {
  json j;
  j["command"] = command_;
  j["version"] = kVersion;
  const auto elapsed = std::chrono::steady_clock::now() - started_;
  j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["created_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();

  json arts = json::array();
  for (const auto& p : artifacts_) {
    json a;
    a["path"] = std::filesystem::relative(p, run_dir_).generic_string();
    a["bytes"] = std::filesystem::file_size(p);
    a["fnv1a64"] = file_checksum(p);
    arts.push_back(std::move(a));
  }
  j["artifacts"] = std::move(arts);
  for (const auto& [k, v] : notes_) j["notes"][k] = v;

  const auto out = run_dir_ / ("manifest_" + command_ + ".json");
  jsonio::write_json_file(out, j);
  return out;
}

}  // namespace triage::pipeline
