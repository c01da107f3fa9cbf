#include <cmath>
#include <initializer_list>
#include <set>

#include "json.hpp"
#include "rnsscompat/catalog.hpp"
#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field '" + std::string(key) + "'");
  if (!it->is_number()) {
    throw ConfigError(where + ": field '" + std::string(key) + "' must be a number");
  }
  return it->get<double>();
}

// null or missing maps to kAbsentDb.
double density(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return kAbsentDb;
  return number(obj, where, key);
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, where, key);
}

std::string text(const json& obj, const std::string& where, const char* key, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw ConfigError(where + ": missing field '" + std::string(key) + "'");
    return {};
  }
  if (!it->is_string()) {
    throw ConfigError(where + ": field '" + std::string(key) + "' must be a string");
  }
  return it->get<std::string>();
}

json db_or_null(double db) { return is_absent(db) ? json(nullptr) : json(db); }

void throw_violations(const std::string& where, const std::vector<Violation>& v) {
  if (v.empty()) return;
  std::string msg = where + ": invalid field '" + v.front().field + "': " + v.front().message;
  for (std::size_t i = 1; i < v.size(); ++i) msg += "; '" + v[i].field + "': " + v[i].message;
  throw ConfigError(msg);
}

ModulationKind parse_modulation(const json& j, const std::string& where) {
  const std::string kind = text(j, where, "kind");
  ModulationKind mod;
  if (kind == "BPSK_R" || kind == "QPSK" || kind == "EFQPSK") {
    reject_unknown(j, where, {"kind", "chip_rate_hz"});
    double rc = number(j, where, "chip_rate_hz");
    if (kind == "BPSK_R") mod = BpskR{rc};
    if (kind == "QPSK") mod = Qpsk{rc};
    if (kind == "EFQPSK") mod = Efqpsk{rc};
  } else if (kind == "BOC_SIN" || kind == "BOC_COS" || kind == "ALTBOC") {
    reject_unknown(j, where, {"kind", "subcarrier_rate_hz", "chip_rate_hz"});
    double fs = number(j, where, "subcarrier_rate_hz");
    double rc = number(j, where, "chip_rate_hz");
    if (kind == "BOC_SIN") mod = BocSin{fs, rc};
    if (kind == "BOC_COS") mod = BocCos{fs, rc};
    if (kind == "ALTBOC") mod = AltBoc{fs, rc};
  } else if (kind == "CBOC") {
    reject_unknown(j, where, {"kind", "high_rate_hz", "low_rate_hz", "power_split"});
    mod = Cboc{number(j, where, "high_rate_hz"), number(j, where, "low_rate_hz"),
               number(j, where, "power_split")};
  } else {
    throw ConfigError(where + ": unknown modulation kind '" + kind + "'");
  }
  return mod;
}

json modulation_to_json(const ModulationKind& mod) {
  json j;
  j["kind"] = modulation_name(mod);
  if (const auto* m = std::get_if<Cboc>(&mod)) {
    j["high_rate_hz"] = m->high_rate;
    j["low_rate_hz"] = m->low_rate;
    j["power_split"] = m->power_split;
    return j;
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BocSin> || std::is_same_v<T, BocCos> ||
                      std::is_same_v<T, AltBoc>) {
          j["subcarrier_rate_hz"] = m.subcarrier_rate;
          j["chip_rate_hz"] = m.chip_rate;
        } else if constexpr (!std::is_same_v<T, Cboc>) {
          j["chip_rate_hz"] = m.chip_rate;
        }
      },
      mod);
  return j;
}

SignalSpec parse_signal(const json& j, const std::string& where_in) {
  reject_unknown(j, where_in,
                 {"id", "name", "system", "center_frequency_hz", "modulation",
                  "max_single_sat_rip_dbw", "aggregation_gain_db", "doppler_range_hz",
                  "occupied_bandwidth_99_5_hz", "receiver_ref_bandwidth_hz", "carrier_power_dbw"});
  SignalSpec s;
  s.id = text(j, where_in, "id");
  const std::string where = where_in + " '" + s.id + "'";
  s.name = text(j, where, "name", false);
  s.system = text(j, where, "system", false);
  s.center_frequency_hz = number(j, where, "center_frequency_hz");
  if (!j.contains("modulation")) throw ConfigError(where + ": missing field 'modulation'");
  s.modulation = parse_modulation(j.at("modulation"), where + " modulation");
  s.max_single_sat_rip_dbw = density(j, where, "max_single_sat_rip_dbw");
  s.aggregation_gain_db = number_or(j, where, "aggregation_gain_db", 0.0);
  s.doppler_range_hz = number_or(j, where, "doppler_range_hz", 0.0);
  s.occupied_bandwidth_99_5_hz = number_or(j, where, "occupied_bandwidth_99_5_hz", 0.0);
  s.receiver_ref_bandwidth_hz = number(j, where, "receiver_ref_bandwidth_hz");
  if (j.contains("carrier_power_dbw") && !j.at("carrier_power_dbw").is_null()) {
    s.carrier_power_dbw = number(j, where, "carrier_power_dbw");
  }
  throw_violations(where, validate_spec(s));
  return s;
}

json signal_to_json(const SignalSpec& s) {
  json j;
  j["id"] = s.id;
  j["name"] = s.name;
  j["system"] = s.system;
  j["center_frequency_hz"] = s.center_frequency_hz;
  j["modulation"] = modulation_to_json(s.modulation);
  j["max_single_sat_rip_dbw"] = db_or_null(s.max_single_sat_rip_dbw);
  j["aggregation_gain_db"] = s.aggregation_gain_db;
  j["doppler_range_hz"] = s.doppler_range_hz;
  j["occupied_bandwidth_99_5_hz"] = s.occupied_bandwidth_99_5_hz;
  j["receiver_ref_bandwidth_hz"] = s.receiver_ref_bandwidth_hz;
  j["carrier_power_dbw"] = s.carrier_power_dbw ? json(*s.carrier_power_dbw) : json(nullptr);
  return j;
}

AntennaPattern parse_pattern(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": antenna pattern must be an array");
  std::vector<AntennaPattern::Sample> samples;
  for (const auto& e : j) {
    reject_unknown(e, where, {"angle_deg", "gain_dbi"});
    samples.push_back({number(e, where, "angle_deg"), number(e, where, "gain_dbi")});
  }
  try {
    return AntennaPattern(std::move(samples));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json pattern_to_json(const AntennaPattern& p) {
  json arr = json::array();
  for (const auto& s : p.samples()) arr.push_back({{"angle_deg", s.angle_deg}, {"gain_dbi", s.gain_dbi}});
  return arr;
}

}  // namespace

Catalog parse_catalog(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  reject_unknown(root, "catalog",
                 {"catalog", "signals", "noise_environments", "fixed_ssc", "constellations"});
  Catalog cat;
  cat.name = text(root, "catalog", "catalog", false);

  if (root.contains("signals")) {
    for (const auto& js : root.at("signals")) {
      cat.signals.push_back(parse_signal(js, "signal"));
    }
  }
  if (root.contains("noise_environments")) {
    for (const auto& je : root.at("noise_environments")) {
      const std::string where = "noise_environment";
      reject_unknown(je, where,
                     {"victim", "n0_dbw_hz", "i_ext_dbw_hz", "i_ref_dbw_hz", "i_rem_dbw_hz",
                      "l_proc_db"});
      const std::string victim = text(je, where, "victim");
      NoiseEnvironment env;
      env.n0_dbw_hz = density(je, where, "n0_dbw_hz");
      env.i_ext_dbw_hz = density(je, where, "i_ext_dbw_hz");
      env.i_ref_dbw_hz = density(je, where, "i_ref_dbw_hz");
      env.i_rem_dbw_hz = density(je, where, "i_rem_dbw_hz");
      env.l_proc_db = number_or(je, where, "l_proc_db", 0.0);
      throw_violations(where + " '" + victim + "'", validate_environment(env));
      cat.environments[victim] = env;
    }
  }
  if (root.contains("fixed_ssc")) {
    for (const auto& jf : root.at("fixed_ssc")) {
      const std::string where = "fixed_ssc";
      reject_unknown(jf, where, {"victim", "interferer", "ssc_db_hz"});
      cat.fixed_ssc.push_back(
          {text(jf, where, "victim"), text(jf, where, "interferer"), number(jf, where, "ssc_db_hz")});
    }
  }
  if (root.contains("constellations")) {
    for (const auto& jc : root.at("constellations")) {
      const std::string where = "constellation";
      reject_unknown(jc, where,
                     {"id", "planes", "sats_per_plane", "inclination_deg", "altitude_m",
                      "phasing_offset_deg", "tx_eirp_dbw", "tx_pattern"});
      ConstellationSpec c;
      c.id = text(jc, where, "id");
      c.planes = static_cast<int>(number(jc, where, "planes"));
      c.sats_per_plane = static_cast<int>(number(jc, where, "sats_per_plane"));
      c.inclination_deg = number(jc, where, "inclination_deg");
      c.altitude_m = number(jc, where, "altitude_m");
      c.phasing_offset_deg = number_or(jc, where, "phasing_offset_deg", 0.0);
      c.tx_eirp_dbw = number_or(jc, where, "tx_eirp_dbw", 0.0);
      if (jc.contains("tx_pattern")) c.tx_pattern = parse_pattern(jc.at("tx_pattern"), where + " tx_pattern");
      throw_violations(where + " '" + c.id + "'", validate_constellation(c));
      cat.constellations.push_back(std::move(c));
    }
  }
  return cat;
}

std::string serialize_catalog(const Catalog& cat) {
  json root;
  root["catalog"] = cat.name;
  root["signals"] = json::array();
  for (const auto& s : cat.signals) root["signals"].push_back(signal_to_json(s));
  root["noise_environments"] = json::array();
  for (const auto& [victim, env] : cat.environments) {
    root["noise_environments"].push_back({{"victim", victim},
                                          {"n0_dbw_hz", db_or_null(env.n0_dbw_hz)},
                                          {"i_ext_dbw_hz", db_or_null(env.i_ext_dbw_hz)},
                                          {"i_ref_dbw_hz", db_or_null(env.i_ref_dbw_hz)},
                                          {"i_rem_dbw_hz", db_or_null(env.i_rem_dbw_hz)},
                                          {"l_proc_db", env.l_proc_db}});
  }
  root["fixed_ssc"] = json::array();
  for (const auto& e : cat.fixed_ssc) {
    root["fixed_ssc"].push_back(
        {{"victim", e.victim_id}, {"interferer", e.interferer_id}, {"ssc_db_hz", e.ssc_db_hz}});
  }
  root["constellations"] = json::array();
  for (const auto& c : cat.constellations) {
    root["constellations"].push_back({{"id", c.id},
                                      {"planes", c.planes},
                                      {"sats_per_plane", c.sats_per_plane},
                                      {"inclination_deg", c.inclination_deg},
                                      {"altitude_m", c.altitude_m},
                                      {"phasing_offset_deg", c.phasing_offset_deg},
                                      {"tx_eirp_dbw", c.tx_eirp_dbw},
                                      {"tx_pattern", pattern_to_json(c.tx_pattern)}});
  }
  return root.dump(2) + "\n";
}

}  // namespace rnsscompat
