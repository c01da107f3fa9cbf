#include "rnsscompat/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw ConfigError("output directory does not exist: " + dir.string());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot replace " + path.string());
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SampledPsd read_psd_csv(std::istream& in) {
  SampledPsd psd;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("offset_hz", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("PSD CSV line " + std::to_string(lineno) + ": expected two columns");
    try {
      psd.grid.push_back(std::stod(line.substr(0, comma)));
      psd.density.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("PSD CSV line " + std::to_string(lineno) + ": not a number");
    }
    if (psd.density.back() < 0.0) throw ConfigError("PSD CSV line " + std::to_string(lineno) + ": negative density");
  }
  if (psd.grid.size() < 2) throw ConfigError("PSD CSV: need at least two rows");
  const double df = psd.grid[1] - psd.grid[0];
  for (std::size_t i = 1; i < psd.grid.size(); ++i) {
    if (!(df > 0.0) || std::abs(psd.grid[i] - psd.grid[i - 1] - df) > 1e-6 * df + 1e-3) {
      throw ConfigError("PSD CSV: grid must be uniform and increasing");
    }
  }
  psd.normalization_band = psd.coverage();
  const double total = integrate(psd, psd.normalization_band);
  if (!(total > 0.0)) throw ConfigError("PSD CSV: no power");
  for (auto& d : psd.density) d /= total;
  return psd;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command}, {"argv", argv},       {"config_paths", config_paths},
          {"parameters", parameters}, {"outputs", outputs}, {"version", version},
          {"seed", seed},       {"timestamp", timestamp}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config_paths = j.value("config_paths", std::vector<std::string>{});
    m.parameters = j.value("parameters", nlohmann::json::object());
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.version = j.value("version", std::string{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.timestamp = j.value("timestamp", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid manifest: ") + e.what());
  }
  return m;
}

fs::path manifest_path_for(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

}  // namespace rnsscompat
