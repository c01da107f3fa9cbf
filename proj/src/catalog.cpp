#include "rnsscompat/catalog.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(std::vector<Violation>& out, const std::string& field, double value) {
  if (!(std::isfinite(value) && value > 0.0)) {
    out.push_back({field, "must be finite and > 0 (got " + std::to_string(value) + ")"});
  }
}

void require_density(std::vector<Violation>& out, const std::string& field, double value) {
  if (!(std::isfinite(value) || is_absent(value))) {
    out.push_back({field, "must be finite or absent"});
  }
}

}  // namespace

std::string modulation_name(const ModulationKind& mod) {
  return std::visit(Overloaded{
                        [](const BpskR&) { return std::string("BPSK_R"); },
                        [](const Qpsk&) { return std::string("QPSK"); },
                        [](const BocSin&) { return std::string("BOC_SIN"); },
                        [](const BocCos&) { return std::string("BOC_COS"); },
                        [](const Cboc&) { return std::string("CBOC"); },
                        [](const AltBoc&) { return std::string("ALTBOC"); },
                        [](const Efqpsk&) { return std::string("EFQPSK"); },
                    },
                    mod);
}

double chip_rate_of(const ModulationKind& mod) {
  return std::visit(Overloaded{
                        [](const Cboc& m) { return m.low_rate; },
                        [](const auto& m) { return m.chip_rate; },
                    },
                    mod);
}

std::vector<Violation> validate_modulation(const ModulationKind& mod) {
  std::vector<Violation> out;
  std::visit(Overloaded{
                 [&](const BpskR& m) { require_positive(out, "modulation.chip_rate_hz", m.chip_rate); },
                 [&](const Qpsk& m) { require_positive(out, "modulation.chip_rate_hz", m.chip_rate); },
                 [&](const Efqpsk& m) { require_positive(out, "modulation.chip_rate_hz", m.chip_rate); },
                 [&](const BocSin& m) {
                   require_positive(out, "modulation.subcarrier_rate_hz", m.subcarrier_rate);
                   require_positive(out, "modulation.chip_rate_hz", m.chip_rate);
                 },
                 [&](const BocCos& m) {
                   require_positive(out, "modulation.subcarrier_rate_hz", m.subcarrier_rate);
                   require_positive(out, "modulation.chip_rate_hz", m.chip_rate);
                 },
                 [&](const AltBoc& m) {
                   require_positive(out, "modulation.subcarrier_rate_hz", m.subcarrier_rate);
                   require_positive(out, "modulation.chip_rate_hz", m.chip_rate);
                 },
                 [&](const Cboc& m) {
                   require_positive(out, "modulation.high_rate_hz", m.high_rate);
                   require_positive(out, "modulation.low_rate_hz", m.low_rate);
                   if (!(m.power_split > 0.0 && m.power_split < 1.0)) {
                     out.push_back({"modulation.power_split", "must lie in (0, 1)"});
                   }
                 },
             },
             mod);
  return out;
}

std::vector<Violation> validate_spec(const SignalSpec& spec) {
  std::vector<Violation> out;
  if (spec.id.empty()) out.push_back({"id", "must not be empty"});
  require_positive(out, "center_frequency_hz", spec.center_frequency_hz);
  require_positive(out, "receiver_ref_bandwidth_hz", spec.receiver_ref_bandwidth_hz);
  auto mod = validate_modulation(spec.modulation);
  out.insert(out.end(), mod.begin(), mod.end());
  if (!(std::isfinite(spec.max_single_sat_rip_dbw) || is_absent(spec.max_single_sat_rip_dbw))) {
    out.push_back({"max_single_sat_rip_dbw", "must be finite or absent"});
  }
  if (!std::isfinite(spec.aggregation_gain_db)) {
    out.push_back({"aggregation_gain_db", "must be finite"});
  }
  if (!(std::isfinite(spec.doppler_range_hz) && spec.doppler_range_hz >= 0.0)) {
    out.push_back({"doppler_range_hz", "must be finite and >= 0"});
  }
  if (!(std::isfinite(spec.occupied_bandwidth_99_5_hz) && spec.occupied_bandwidth_99_5_hz >= 0.0)) {
    out.push_back({"occupied_bandwidth_99_5_hz", "must be finite and >= 0"});
  }
  if (spec.carrier_power_dbw && !std::isfinite(*spec.carrier_power_dbw)) {
    out.push_back({"carrier_power_dbw", "must be finite when present"});
  }
  return out;
}

std::vector<Violation> validate_environment(const NoiseEnvironment& env) {
  std::vector<Violation> out;
  require_density(out, "n0_dbw_hz", env.n0_dbw_hz);
  require_density(out, "i_ext_dbw_hz", env.i_ext_dbw_hz);
  require_density(out, "i_ref_dbw_hz", env.i_ref_dbw_hz);
  require_density(out, "i_rem_dbw_hz", env.i_rem_dbw_hz);
  if (!std::isfinite(env.l_proc_db)) out.push_back({"l_proc_db", "must be finite"});
  return out;
}

std::vector<Violation> validate_constellation(const ConstellationSpec& spec) {
  std::vector<Violation> out;
  if (spec.planes < 1) out.push_back({"planes", "must be >= 1"});
  if (spec.sats_per_plane < 1) out.push_back({"sats_per_plane", "must be >= 1"});
  require_positive(out, "altitude_m", spec.altitude_m);
  if (!std::isfinite(spec.inclination_deg)) out.push_back({"inclination_deg", "must be finite"});
  if (!std::isfinite(spec.phasing_offset_deg)) {
    out.push_back({"phasing_offset_deg", "must be finite"});
  }
  if (!std::isfinite(spec.tx_eirp_dbw)) out.push_back({"tx_eirp_dbw", "must be finite"});
  return out;
}

std::string canonical_key(std::string_view id) {
  std::string key;
  for (char c : id) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return key;
}

const SignalSpec* Catalog::find_signal(std::string_view id_or_name) const {
  const std::string key = canonical_key(id_or_name);
  for (const auto& s : signals) {
    if (canonical_key(s.id) == key) return &s;
  }
  for (const auto& s : signals) {
    if (canonical_key(s.name) == key) return &s;
  }
  return nullptr;
}

const SignalSpec& Catalog::signal(std::string_view id_or_name) const {
  if (const auto* s = find_signal(id_or_name)) return *s;
  throw ConfigError("unknown signal id '" + std::string(id_or_name) + "' in catalog '" + name + "'");
}

const NoiseEnvironment* Catalog::environment(std::string_view id_or_name) const {
  const std::string key = canonical_key(id_or_name);
  // Resolve through the signal table so display names work too.
  if (const auto* s = find_signal(id_or_name)) {
    auto it = environments.find(s->id);
    if (it != environments.end()) return &it->second;
  }
  for (const auto& [victim, env] : environments) {
    if (canonical_key(victim) == key) return &env;
  }
  return nullptr;
}

std::optional<double> Catalog::fixed_ssc_for(std::string_view victim,
                                             std::string_view interferer) const {
  const std::string vk = canonical_key(victim);
  const std::string ik = canonical_key(interferer);
  for (const auto& e : fixed_ssc) {
    if (canonical_key(e.victim_id) == vk && canonical_key(e.interferer_id) == ik) {
      return e.ssc_db_hz;
    }
  }
  return std::nullopt;
}

const ConstellationSpec& Catalog::constellation(std::string_view id) const {
  const std::string key = canonical_key(id);
  for (const auto& c : constellations) {
    if (canonical_key(c.id) == key) return c;
  }
  throw ConfigError("unknown constellation id '" + std::string(id) + "'");
}

std::vector<std::string> Catalog::fixed_table_victims(std::string_view interferer) const {
  std::vector<std::string> out;
  const std::string ik = canonical_key(interferer);
  for (const auto& e : fixed_ssc) {
    if (canonical_key(e.interferer_id) == ik) out.push_back(e.victim_id);
  }
  return out;
}

Catalog load_catalog(const std::filesystem::path& path) {
  if (path.string() == kPaperCatalogName) return builtin_catalog(kPaperCatalogName);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_catalog(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

NoiseEnvironment load_noise_environment(const std::filesystem::path& path,
                                        std::string_view victim_id) {
  const Catalog cat = load_catalog(path);
  if (const auto* env = cat.environment(victim_id)) return *env;
  throw ConfigError("unknown victim '" + std::string(victim_id) +
                    "': no noise environment in '" + path.string() + "'");
}

}  // namespace rnsscompat
