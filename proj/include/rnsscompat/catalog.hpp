#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rnsscompat/antenna.hpp"
#include "rnsscompat/units.hpp"

namespace rnsscompat {

// Modulation families. All rates are in Hz (chips/s for chip rates).
struct BpskR {
  double chip_rate = 0.0;
  bool operator==(const BpskR&) const = default;
};
struct Qpsk {
  double chip_rate = 0.0;
  bool operator==(const Qpsk&) const = default;
};
struct BocSin {
  double subcarrier_rate = 0.0;
  double chip_rate = 0.0;
  bool operator==(const BocSin&) const = default;
};
struct BocCos {
  double subcarrier_rate = 0.0;
  double chip_rate = 0.0;
  bool operator==(const BocCos&) const = default;
};
// Power-weighted mix of BOC_SIN(high_rate, low_rate) and BOC_SIN(low_rate, low_rate).
// power_split is the share carried by the high-rate component.
struct Cboc {
  double high_rate = 0.0;
  double low_rate = 0.0;
  double power_split = 0.0;
  bool operator==(const Cboc&) const = default;
};
struct AltBoc {
  double subcarrier_rate = 0.0;
  double chip_rate = 0.0;
  bool operator==(const AltBoc&) const = default;
};
struct Efqpsk {
  double chip_rate = 0.0;
  bool operator==(const Efqpsk&) const = default;
};

using ModulationKind = std::variant<BpskR, Qpsk, BocSin, BocCos, Cboc, AltBoc, Efqpsk>;

std::string modulation_name(const ModulationKind& mod);
// Spreading-code chip rate; for CBOC this is low_rate.
double chip_rate_of(const ModulationKind& mod);

struct SignalSpec {
  std::string id;
  std::string name;
  std::string system;
  double center_frequency_hz = 0.0;
  ModulationKind modulation = BpskR{};
  double max_single_sat_rip_dbw = kAbsentDb;
  double aggregation_gain_db = 0.0;
  double doppler_range_hz = 0.0;
  double occupied_bandwidth_99_5_hz = 0.0;
  double receiver_ref_bandwidth_hz = 0.0;
  std::optional<double> carrier_power_dbw;

  bool operator==(const SignalSpec&) const = default;
};

// Victim-side noise ledger, all densities in dB(W/Hz). kAbsentDb marks a
// component that contributes no power.
struct NoiseEnvironment {
  double n0_dbw_hz = kAbsentDb;
  double i_ext_dbw_hz = kAbsentDb;
  double i_ref_dbw_hz = kAbsentDb;
  double i_rem_dbw_hz = kAbsentDb;
  double l_proc_db = 0.0;

  bool operator==(const NoiseEnvironment&) const = default;
};

struct ConstellationSpec {
  std::string id;
  int planes = 1;
  int sats_per_plane = 1;
  double inclination_deg = 0.0;
  double altitude_m = 0.0;
  double phasing_offset_deg = 0.0;
  double tx_eirp_dbw = 0.0;
  AntennaPattern tx_pattern;

  bool operator==(const ConstellationSpec&) const = default;
};

struct FixedSscEntry {
  std::string victim_id;
  std::string interferer_id;
  double ssc_db_hz = 0.0;

  bool operator==(const FixedSscEntry&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate_modulation(const ModulationKind& mod);
std::vector<Violation> validate_spec(const SignalSpec& spec);
std::vector<Violation> validate_environment(const NoiseEnvironment& env);
std::vector<Violation> validate_constellation(const ConstellationSpec& spec);

// Identifier matching ignores case and punctuation, so "GPS L1 C/A",
// "gps_l1ca" and "GPS-L1CA" all name the same signal.
std::string canonical_key(std::string_view id);

class Catalog {
 public:
  std::string name;
  std::vector<SignalSpec> signals;
  // Keyed by signal id.
  std::map<std::string, NoiseEnvironment> environments;
  std::vector<FixedSscEntry> fixed_ssc;
  std::vector<ConstellationSpec> constellations;

  const SignalSpec* find_signal(std::string_view id_or_name) const;
  // Throws ConfigError naming the unknown id.
  const SignalSpec& signal(std::string_view id_or_name) const;
  const NoiseEnvironment* environment(std::string_view id_or_name) const;
  std::optional<double> fixed_ssc_for(std::string_view victim,
                                      std::string_view interferer) const;
  const ConstellationSpec& constellation(std::string_view id) const;
  // Victims listed in the fixed SSC table for this interferer, in table order.
  std::vector<std::string> fixed_table_victims(std::string_view interferer) const;

  bool operator==(const Catalog&) const = default;
};

inline constexpr std::string_view kPaperCatalogName = "paper-2025";
inline constexpr const char* kCatalogEnvVar = "RNSSCOMPAT_CATALOG";

// Built-in catalog; throws ConfigError for unknown names.
Catalog builtin_catalog(std::string_view name = kPaperCatalogName);

Catalog parse_catalog(std::string_view json_text);
std::string serialize_catalog(const Catalog& catalog);

// Loads a JSON catalog file; the reserved name "paper-2025" yields the
// built-in catalog without touching the filesystem.
Catalog load_catalog(const std::filesystem::path& path);

// Reads a noise environment for one victim from a catalog or environment
// file (or the built-in set when path is "paper-2025").
NoiseEnvironment load_noise_environment(const std::filesystem::path& path,
                                        std::string_view victim_id);

}  // namespace rnsscompat
