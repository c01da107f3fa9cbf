#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rnsscompat/spectrum.hpp"

namespace rnsscompat {

// Writes content to a sibling temporary file and renames it over path.
// Throws ConfigError when the directory is not writable.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

// Reads the two-column CSV written by write_psd_csv. The grid must be
// uniform; the density is renormalized over the whole grid.
SampledPsd read_psd_csv(std::istream& in);

std::string iso8601_utc_now();

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::string> config_paths;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::string version;
  std::uint64_t seed = 0;
  std::string timestamp;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// <output>.manifest.json
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace rnsscompat
