#include <string>

#include "rnsscompat/catalog.hpp"
#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace {

constexpr double kL1 = 1575.42e6;
constexpr double kL2 = 1227.60e6;
constexpr double kL5 = 1176.45e6;
constexpr double kE5 = 1191.795e6;
constexpr double kE5b = 1207.14e6;
constexpr double kE6 = 1278.75e6;

SignalSpec victim(std::string id, std::string name, std::string system, double fc,
                  ModulationKind mod, double rx_bw = 24.0e6) {
  SignalSpec s;
  s.id = std::move(id);
  s.name = std::move(name);
  s.system = std::move(system);
  s.center_frequency_hz = fc;
  s.modulation = mod;
  s.receiver_ref_bandwidth_hz = rx_bw;
  return s;
}

// Pulsar FOC filing values (X1/X5) plus GPS, SBAS and Galileo victim
// definitions following the public ITU-R M.1787 signal conventions.
std::vector<SignalSpec> builtin_signals() {
  std::vector<SignalSpec> out;

  SignalSpec x1;
  x1.id = "X1";
  x1.name = "Pulsar X1";
  x1.system = "Pulsar";
  x1.center_frequency_hz = 1593.3225e6;
  x1.modulation = Efqpsk{1.023e6};
  x1.max_single_sat_rip_dbw = -138.4;
  x1.aggregation_gain_db = 13.1;
  x1.doppler_range_hz = 33.8e3;
  x1.occupied_bandwidth_99_5_hz = 1.8e6;
  x1.receiver_ref_bandwidth_hz = 4.092e6;
  out.push_back(x1);

  SignalSpec x5;
  x5.id = "X5";
  x5.name = "Pulsar X5";
  x5.system = "Pulsar";
  x5.center_frequency_hz = 1190.51625e6;
  x5.modulation = Efqpsk{10.23e6};
  x5.max_single_sat_rip_dbw = -136.0;
  x5.aggregation_gain_db = 9.8;
  x5.doppler_range_hz = 25.2e3;
  x5.occupied_bandwidth_99_5_hz = 17.7e6;
  x5.receiver_ref_bandwidth_hz = 20.46e6;
  out.push_back(x5);

  const Cboc mboc{6.138e6, 1.023e6, 1.0 / 11.0};

  auto l1ca = victim("GPS_L1CA", "GPS L1 C/A", "GPS", kL1, BpskR{1.023e6});
  l1ca.carrier_power_dbw = -158.5;
  out.push_back(l1ca);
  out.push_back(victim("GPS_L1PY", "GPS L1 P(Y)", "GPS", kL1, BpskR{10.23e6}));
  out.push_back(victim("GPS_L1M", "GPS L1 M", "GPS", kL1, BocSin{10.23e6, 5.115e6}));
  out.push_back(victim("GPS_L1C", "GPS L1C", "GPS", kL1, mboc));
  out.push_back(victim("WAAS_L1", "WAAS L1", "SBAS", kL1, BpskR{1.023e6}));
  out.push_back(victim("GAL_E1A", "GAL E1-A", "Galileo", kL1, BocCos{15.345e6, 2.5575e6}));
  out.push_back(victim("GAL_E1BC", "GAL E1-BC", "Galileo", kL1, mboc));

  out.push_back(victim("GPS_L2PY", "GPS L2 P(Y)", "GPS", kL2, BpskR{10.23e6}));
  out.push_back(victim("GPS_L2M", "GPS L2 M", "GPS", kL2, BocSin{10.23e6, 5.115e6}));
  out.push_back(victim("GPS_L5", "GPS L5", "GPS", kL5, BpskR{10.23e6}));
  out.push_back(victim("WAAS_L5", "WAAS L5", "SBAS", kL5, BpskR{10.23e6}));
  out.push_back(victim("GAL_E5", "GAL E5", "Galileo", kE5, AltBoc{15.345e6, 10.23e6},
                       51.15e6));
  out.push_back(victim("GAL_E5A", "GAL E5a", "Galileo", kL5, BpskR{10.23e6}));
  out.push_back(victim("GAL_E5B", "GAL E5b", "Galileo", kE5b, BpskR{10.23e6}));
  out.push_back(victim("GAL_E6BC", "GAL E6-BC", "Galileo", kE6, BpskR{5.115e6}));
  out.push_back(victim("GAL_E6A", "GAL E6-A", "Galileo", kE6, BocCos{10.23e6, 5.115e6}));
  return out;
}

NoiseEnvironment ledger(double i_ref, double i_rem) {
  return NoiseEnvironment{-201.50, -206.50, i_ref, i_rem, 1.0};
}

}  // namespace

Catalog builtin_catalog(std::string_view name) {
  if (name != kPaperCatalogName) {
    throw ConfigError("unknown built-in catalog '" + std::string(name) + "'");
  }
  Catalog cat;
  cat.name = std::string(kPaperCatalogName);
  cat.signals = builtin_signals();

  cat.environments["GPS_L1CA"] = ledger(-205.81, -204.71);
  cat.environments["GAL_E1A"] = ledger(-215.34, -214.77);
  cat.environments["GPS_L5"] = ledger(-213.93, -208.99);
  cat.environments["GAL_E5"] = ledger(-216.60, -210.86);

  cat.fixed_ssc = {
      {"GPS_L1CA", "X1", -97.41},  {"GPS_L1PY", "X1", -87.86},  {"GPS_L1M", "X1", -106.75},
      {"GPS_L1C", "X1", -86.43},   {"WAAS_L1", "X1", -97.41},   {"GAL_E1A", "X1", -85.23},
      {"GAL_E1BC", "X1", -86.43},  {"GPS_L2PY", "X5", -93.67},  {"GPS_L2M", "X5", -90.56},
      {"GPS_L5", "X5", -85.04},    {"WAAS_L5", "X5", -85.04},   {"GAL_E5", "X5", -85.99},
      {"GAL_E6BC", "X5", -104.77}, {"GAL_E6A", "X5", -96.16},
  };

  // Placeholder shell: the Pulsar orbital parameters are not published.
  // 258 satellites as a 6 x 43 Walker-delta 258/6/1 pattern.
  ConstellationSpec shell;
  shell.id = "pulsar-foc-placeholder";
  shell.planes = 6;
  shell.sats_per_plane = 43;
  shell.inclination_deg = 87.0;
  shell.altitude_m = 1000e3;
  shell.phasing_offset_deg = 360.0 / 258.0;
  shell.tx_eirp_dbw = 18.0;
  shell.tx_pattern = AntennaPattern::isotropic();
  cat.constellations.push_back(shell);
  return cat;
}

}  // namespace rnsscompat
