#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbles/series.hpp"

namespace bubbles::cli {

namespace fs = std::filesystem;

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

/// Ingests a date/value CSV supplied through `flag`; a missing file is
/// Error(io) naming the flag.
Series read_series(const fs::path& path, const std::string& flag, const std::string& date_column,
                   const std::string& value_column);

void ensure_directory(const fs::path& dir);
void write_text(const fs::path& path, std::string_view text);
/// Two-space indented JSON plus a trailing newline.
void write_json(const fs::path& path, const nlohmann::json& j);
void write_series(const fs::path& path, const Series& x);

/// Run record: resolved parameters, input digests, artifacts and notes.
/// Contains no timestamps, so reruns reproduce it byte for byte.
class Manifest {
 public:
  explicit Manifest(std::string command);

  nlohmann::json& parameters() { return doc_["parameters"]; }
  void input(const std::string& role, const fs::path& path);
  void artifact(const fs::path& relative);
  void note(const std::string& text);
  const std::vector<std::string>& notes() const { return notes_; }

  /// Writes DIR/manifest.json.
  void write(const fs::path& dir);

 private:
  nlohmann::json doc_;
  std::vector<std::string> artifacts_;
  std::vector<std::string> notes_;
};

/// Progress on stderr unless silenced.
void progress(const std::string& text);
void set_quiet(bool quiet);

}  // namespace bubbles::cli
