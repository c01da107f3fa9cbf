// rnsscompat: command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 configuration error,
// 3 computation error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rnsscompat/aggregation.hpp"
#include "rnsscompat/basebandsim.hpp"
#include "rnsscompat/catalog.hpp"
#include "rnsscompat/error.hpp"
#include "rnsscompat/interference.hpp"
#include "rnsscompat/io.hpp"
#include "rnsscompat/spectrum.hpp"

#ifndef RNSSCOMPAT_VERSION
#define RNSSCOMPAT_VERSION "0.0.0"
#endif

namespace {

using namespace rnsscompat;
using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kComputation = 3 };

struct Context {
  std::string catalog_path;
  std::vector<std::string> argv;
};

std::string default_catalog() {
  const char* env = std::getenv(kCatalogEnvVar);
  return (env && *env) ? env : std::string(kPaperCatalogName);
}

std::vector<std::string> config_paths(const Context& ctx, std::initializer_list<std::string> extra = {}) {
  std::vector<std::string> out{ctx.catalog_path};
  for (const auto& e : extra) {
    if (!e.empty()) out.push_back(e);
  }
  return out;
}

void write_manifest(const Context& ctx, const fs::path& manifest, const std::string& command, json parameters,
                    std::vector<std::string> configs, std::uint64_t seed, std::vector<std::string> outputs) {
  RunManifest m;
  m.command = command;
  m.argv = ctx.argv;
  m.config_paths = std::move(configs);
  m.parameters = std::move(parameters);
  m.outputs = std::move(outputs);
  m.version = RNSSCOMPAT_VERSION;
  m.seed = seed;
  m.timestamp = iso8601_utc_now();
  write_file_atomic(manifest, m.to_json().dump(2) + "\n");
}

json db_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

TransitionShaping parse_shaping(const std::string& s) {
  if (s == "enhanced") return TransitionShaping::kEnhanced;
  if (s == "sinusoidal") return TransitionShaping::kSinusoidal;
  throw ConfigError("unknown shaping '" + s + "' (expected enhanced or sinusoidal)");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- psd

struct PsdArgs {
  std::string signal;
  double span_hz = 60e6;
  double spacing_hz = kDefaultGridSpacing;
  std::string source = "analytic";
  std::string shaping = "enhanced";
  std::uint64_t seed = 1;
  std::size_t segment_length = 32768;
  std::string output;
};

int cmd_psd(const Context& ctx, const PsdArgs& a) {
  const Catalog cat = load_catalog(ctx.catalog_path);
  const SignalSpec& sig = cat.signal(a.signal);
  const SscSource source = parse_ssc_source(a.source);
  if (source == SscSource::kFixed) throw ConfigError("psd: --source must be analytic or numeric");
  if (!(a.span_hz > 0.0)) throw ConfigError("psd: --span-hz must be > 0");
  SpectralSettings st;
  st.grid_half_span_hz = 0.5 * a.span_hz;
  st.grid_spacing_hz = a.spacing_hz;
  st.seed = a.seed;
  st.segment_length = a.segment_length;
  st.efqpsk_shaping = parse_shaping(a.shaping);
  const SampledPsd full = signal_psd(sig, source, st);
  // Numeric estimates come on their own FFT grid; resample onto the requested one.
  SampledPsd psd;
  psd.grid = symmetric_grid(0.5 * a.span_hz, a.spacing_hz);
  if (psd.grid.size() < 2) throw ConfigError("psd: span too narrow for the grid spacing");
  for (double f : psd.grid) psd.density.push_back(full.at(f));
  psd.normalization_band = psd.coverage();
  const double total = integrate(psd, psd.normalization_band);
  for (auto& d : psd.density) d /= total;

  const fs::path out = a.output.empty() ? fs::path(sig.id + "_psd.csv") : fs::path(a.output);
  std::ostringstream csv;
  write_psd_csv(csv, psd);
  write_file_atomic(out, csv.str());
  const auto peak = std::max_element(psd.density.begin(), psd.density.end()) - psd.density.begin();
  const double obw = occupied_bandwidth(psd, 0.995);
  write_manifest(ctx, manifest_path_for(out), "psd",
                 {{"signal", sig.id},
                  {"span_hz", a.span_hz},
                  {"spacing_hz", a.spacing_hz},
                  {"source", a.source},
                  {"shaping", a.shaping},
                  {"segment_length", a.segment_length},
                  {"occupied_bandwidth_99_5_hz", obw}},
                 config_paths(ctx), a.seed, {out.string()});
  std::cout << "signal " << sig.id << "  modulation " << modulation_name(sig.modulation) << "\n"
            << "peak_offset_hz " << fmt("%.1f", psd.grid[static_cast<std::size_t>(peak)]) << "\n"
            << "occupied_bandwidth_99_5_hz " << fmt("%.6g", obw) << "\n"
            << "wrote " << out.string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- ssc

struct SscArgs {
  std::string victim;
  std::string interferer;
  std::string victim_psd;
  std::string interferer_psd;
  std::optional<double> offset_hz;
  std::optional<double> band_hz;
  std::string source = "analytic";
  std::string shaping = "enhanced";
  std::uint64_t seed = 1;
  std::string output = "ssc.json";
};

SampledPsd load_psd_file(const std::string& path) {
  std::istringstream in(read_text_file(path));
  return read_psd_csv(in);
}

int cmd_ssc(const Context& ctx, const SscArgs& a) {
  const SscSource source = parse_ssc_source(a.source);
  std::optional<FrequencyBand> band;
  if (a.band_hz) {
    if (!(*a.band_hz > 0.0)) throw ConfigError("ssc: --band-hz must be > 0");
    band = FrequencyBand::centered(*a.band_hz);
  }
  SscResult r;
  std::vector<std::string> configs;
  const bool from_files = !a.victim_psd.empty() || !a.interferer_psd.empty();
  if (from_files) {
    if (a.victim_psd.empty() || a.interferer_psd.empty()) {
      throw ConfigError("ssc: --victim-psd and --interferer-psd must be given together");
    }
    r = compute_ssc(load_psd_file(a.victim_psd), load_psd_file(a.interferer_psd), a.offset_hz.value_or(0.0), band);
    r.victim_id = a.victim.empty() ? a.victim_psd : a.victim;
    r.interferer_id = a.interferer.empty() ? a.interferer_psd : a.interferer;
    configs = {a.victim_psd, a.interferer_psd};
  } else {
    if (a.victim.empty() || a.interferer.empty()) throw ConfigError("ssc: --victim and --interferer are required");
    const Catalog cat = load_catalog(ctx.catalog_path);
    const SignalSpec& v = cat.signal(a.victim);
    const SignalSpec& i = cat.signal(a.interferer);
    if (source == SscSource::kFixed) {
      const auto fixed = cat.fixed_ssc_for(v.id, i.id);
      if (!fixed) throw ConfigError("ssc: no fixed SSC for " + v.id + " / " + i.id);
      r.value_db_hz = *fixed;
      r.victim_id = v.id;
      r.interferer_id = i.id;
      r.frequency_offset_hz = i.center_frequency_hz - v.center_frequency_hz;
    } else {
      SpectralSettings st;
      st.seed = a.seed;
      st.efqpsk_shaping = parse_shaping(a.shaping);
      const SampledPsd vp = signal_psd(v, source, st);
      const SampledPsd ip = signal_psd(i, source, st);
      r = compute_ssc(vp, ip, a.offset_hz.value_or(i.center_frequency_hz - v.center_frequency_hz), band);
      r.victim_id = v.id;
      r.interferer_id = i.id;
    }
    configs = config_paths(ctx);
  }
  const json doc = {{"victim", r.victim_id},
                    {"interferer", r.interferer_id},
                    {"ssc_db_hz", r.value_db_hz},
                    {"ssc_source", from_files ? std::string("files") : a.source},
                    {"frequency_offset_hz", r.frequency_offset_hz},
                    {"integration_band_hz", {r.integration_band.low_hz, r.integration_band.high_hz}},
                    {"grid_spacing_hz", r.grid_spacing_hz}};
  const fs::path out(a.output);
  write_file_atomic(out, doc.dump(2) + "\n");
  write_manifest(ctx, manifest_path_for(out), "ssc",
                 {{"victim", r.victim_id},
                  {"interferer", r.interferer_id},
                  {"source", a.source},
                  {"shaping", a.shaping},
                  {"offset_hz", a.offset_hz ? json(*a.offset_hz) : json(nullptr)},
                  {"band_hz", a.band_hz ? json(*a.band_hz) : json(nullptr)}},
                 configs, a.seed, {out.string()});
  std::cout << fmt("%.2f", r.value_db_hz) << " dB/Hz  (" << r.victim_id << " <- " << r.interferer_id << ")\n";
  return kOk;
}

// ---------------------------------------------------------------- degrade

struct DegradeArgs {
  std::vector<std::string> interferers;
  std::string victims = "paper";
  std::string ssc_source = "fixed";
  std::string env_path;
  std::optional<double> rip_dbw;
  std::optional<double> g_agg_db;
  bool require_delta = false;
  std::uint64_t seed = 1;
  std::string output_prefix = "degradation";
};

void print_table(const DegradationReport& report) {
  std::printf("%-10s %-10s %10s %12s %12s %9s\n", "victim", "interferer", "ssc_db_hz", "i_alt_dbw_hz",
              "pre_dbw_hz", "dcn0_db");
  for (const auto& r : report.rows) {
    const std::string delta = r.delta_cn0_db ? fmt("%.2f", -*r.delta_cn0_db) : "n/a";
    const std::string pre = r.pre_noise_total_dbw_hz ? fmt("%.2f", *r.pre_noise_total_dbw_hz) : "n/a";
    std::printf("%-10s %-10s %10.2f %12s %12s %9s\n", r.victim_id.c_str(), r.interferer_id.c_str(), r.ssc_db_hz,
                fmt("%.2f", r.i_alt_dbw_hz).c_str(), pre.c_str(), delta.c_str());
  }
}

int cmd_degrade(const Context& ctx, const DegradeArgs& a) {
  const Catalog cat = load_catalog(ctx.catalog_path);
  std::map<std::string, NoiseEnvironment> envs = cat.environments;
  if (!a.env_path.empty()) {
    for (const auto& [id, env] : load_catalog(a.env_path).environments) envs[id] = env;
  }
  ReportOptions opts;
  opts.ssc_source = parse_ssc_source(a.ssc_source);
  opts.fixed_table = cat.fixed_ssc;
  opts.spectral.seed = a.seed;

  DegradationReport all;
  all.ssc_source = opts.ssc_source;
  for (const std::string& iid : a.interferers) {
    SignalSpec interferer = cat.signal(iid);
    if (a.rip_dbw) interferer.max_single_sat_rip_dbw = *a.rip_dbw;
    if (a.g_agg_db) interferer.aggregation_gain_db = *a.g_agg_db;
    std::vector<SignalSpec> victims;
    const std::vector<std::string> ids =
        a.victims == "paper" ? cat.fixed_table_victims(interferer.id) : split_list(a.victims);
    if (ids.empty()) throw ConfigError("degrade: no victims for interferer " + interferer.id);
    for (const auto& v : ids) victims.push_back(cat.signal(v));
    DegradationReport r = build_report(victims, interferer, envs, opts);
    for (auto& row : r.rows) {
      if (a.require_delta && !row.delta_cn0_db) {
        throw ConfigError("degrade: no noise environment for victim '" + row.victim_id +
                          "' (supply one with --env)");
      }
      all.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(all.rows.begin(), all.rows.end(), [](const DegradationRow& x, const DegradationRow& y) {
    return std::tie(x.interferer_id, x.victim_id) < std::tie(y.interferer_id, y.victim_id);
  });

  const fs::path csv_path = a.output_prefix + ".csv";
  const fs::path json_path = a.output_prefix + ".json";
  std::ostringstream csv, js;
  write_report_csv(csv, all);
  write_report_json(js, all);
  write_file_atomic(csv_path, csv.str());
  write_file_atomic(json_path, js.str());
  write_manifest(ctx, fs::path(a.output_prefix + ".manifest.json"), "degrade",
                 {{"interferers", a.interferers},
                  {"victims", a.victims},
                  {"ssc_source", a.ssc_source},
                  {"rip_dbw_override", a.rip_dbw ? db_json(*a.rip_dbw) : json(nullptr)},
                  {"g_agg_db_override", a.g_agg_db ? json(*a.g_agg_db) : json(nullptr)},
                  {"require_delta", a.require_delta}},
                 config_paths(ctx, {a.env_path}), a.seed, {csv_path.string(), json_path.string()});
  print_table(all);
  return kOk;
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
  std::string constellation;
  std::string signal;
  std::optional<double> freq_hz;
  double mask_deg = 5.0;
  double lat_min = 0.0, lat_max = 85.0, lat_step = 5.0;
  double lon_min = 0.0;
  std::optional<double> lon_max;
  double lon_step = 5.0;
  double time_step_s = 30.0;
  std::optional<double> duration_s;
  std::string rx_pattern;
  std::string fixture = "none";
  int count = 1;
  std::string output = "aggregate.json";
};

AntennaPattern read_pattern(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  std::vector<AntennaPattern::Sample> samples;
  try {
    for (const auto& s : j) samples.push_back({s.at("angle_deg").get<double>(), s.at("gain_dbi").get<double>()});
  } catch (const json::exception& e) {
    throw ConfigError(path + ": antenna pattern entries need angle_deg and gain_dbi");
  }
  return AntennaPattern(samples);
}

int cmd_aggregate(const Context& ctx, const AggregateArgs& a) {
  const Catalog cat = load_catalog(ctx.catalog_path);
  if (cat.constellations.empty() && a.constellation.empty()) throw ConfigError("aggregate: catalog has no constellation");
  const ConstellationSpec spec =
      cat.constellation(a.constellation.empty() ? cat.constellations.front().id : a.constellation);
  double freq = 0.0;
  if (a.freq_hz) {
    freq = *a.freq_hz;
  } else {
    freq = cat.signal(a.signal.empty() ? std::string("X1") : a.signal).center_frequency_hz;
  }
  if (!(freq > 0.0)) throw ConfigError("aggregate: frequency must be > 0");
  const AntennaPattern rx = a.rx_pattern.empty() ? AntennaPattern::isotropic() : read_pattern(a.rx_pattern);

  AggregationResult r;
  std::vector<UserPoint> users;
  if (a.fixture == "none") {
    const double lon_max = a.lon_max.value_or(a.lon_min + 360.0 / spec.planes);
    users = user_grid(a.lat_min, a.lat_max, a.lat_step, a.lon_min, lon_max, a.lon_step, a.mask_deg, rx);
    const auto times = time_grid(a.duration_s.value_or(orbital_period(spec)), a.time_step_s);
    r = aggregation_gain(spec, users, times, freq);
  } else if (a.fixture == "single" || a.fixture == "equal") {
    const int n = a.fixture == "single" ? 1 : a.count;
    if (n < 1) throw ConfigError("aggregate: --count must be >= 1");
    users = {UserPoint{0.0, 0.0, a.mask_deg, rx}};
    const double radius = orbital_radius(spec);
    std::vector<SatState> sats(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) sats[static_cast<std::size_t>(k)] = {{radius, 0.0, 0.0}, 0, k};
    r = aggregation_gain(spec, sats, users, 0.0, freq);
  } else {
    throw ConfigError("aggregate: unknown fixture '" + a.fixture + "' (none, single, equal)");
  }
  const double bound = 10.0 * std::log10(static_cast<double>(r.max_visible_count));
  std::ostringstream js;
  write_aggregation_json(js, r, users);
  json doc = json::parse(js.str());
  doc["constellation"] = spec.id;
  doc["frequency_hz"] = freq;
  doc["visible_bound_db"] = bound;
  doc["within_visible_bound"] = r.g_agg_db <= bound + 1e-9;
  const fs::path out(a.output);
  write_file_atomic(out, doc.dump(2) + "\n");
  write_manifest(ctx, manifest_path_for(out), "aggregate",
                 {{"constellation", spec.id},
                  {"frequency_hz", freq},
                  {"mask_deg", a.mask_deg},
                  {"lat", {a.lat_min, a.lat_max, a.lat_step}},
                  {"lon_min", a.lon_min},
                  {"lon_step", a.lon_step},
                  {"time_step_s", a.time_step_s},
                  {"fixture", a.fixture},
                  {"count", a.count}},
                 config_paths(ctx, {a.rx_pattern}), 0, {out.string()});
  std::cout << "g_agg_db " << fmt("%.3f", r.g_agg_db) << "  visible " << r.visible_count << "  max_visible "
            << r.max_visible_count << "  bound_db " << fmt("%.3f", bound) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string victim = "GPS_L5";
  std::string interferer = "X5";
  std::string profile = "default";
  double dwell_s = 2.0;
  std::optional<double> victim_power_dbw;
  double noise_density_dbw_hz = kDefaultNoiseDensityDbwHz;
  double sample_rate_hz = 61.38e6;
  std::string shaping = "enhanced";
  std::uint64_t seed = 1;
  std::string output = "ramp.csv";
};

RampProfile load_profile(const std::string& name, double dwell) {
  if (name == "default") return RampProfile::standard(dwell);
  if (name == "baseline") {
    return RampProfile{{{"baseline", kAbsentDb, dwell}, {"baseline", kAbsentDb, dwell}, {"baseline", kAbsentDb, dwell}}};
  }
  json j;
  try {
    j = json::parse(read_text_file(name));
  } catch (const json::parse_error& e) {
    throw ConfigError(name + ": " + e.what());
  }
  RampProfile p;
  try {
    for (const auto& s : j.at("stages")) {
      RampStage st;
      st.label = s.at("label").get<std::string>();
      st.interferer_offset_db = s.at("offset_db").is_null() ? kAbsentDb : s.at("offset_db").get<double>();
      st.dwell_s = s.value("dwell_s", dwell);
      p.stages.push_back(st);
    }
  } catch (const json::exception& e) {
    throw ConfigError(name + ": profile stages need label and offset_db (null for baseline)");
  }
  return p;
}

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
  const Catalog cat = load_catalog(ctx.catalog_path);
  ScenarioConfig cfg;
  cfg.victim = cat.signal(a.victim);
  cfg.interferer = cat.signal(a.interferer);
  cfg.victim_power_dbw = a.victim_power_dbw.value_or(cfg.victim.carrier_power_dbw.value_or(-158.5));
  cfg.noise_density_dbw_hz = a.noise_density_dbw_hz;
  cfg.sample_rate_hz = a.sample_rate_hz;
  cfg.seed = a.seed;
  cfg.efqpsk.shaping = parse_shaping(a.shaping);
  const RampProfile profile = load_profile(a.profile, a.dwell_s);
  const RampResult r = run_ramp_profile(cfg, profile);
  const fs::path out(a.output);
  std::ostringstream csv;
  write_ramp_csv(csv, r);
  write_file_atomic(out, csv.str());
  json stages = json::array();
  for (const auto& s : profile.stages) {
    stages.push_back({{"label", s.label}, {"offset_db", db_json(s.interferer_offset_db)}, {"dwell_s", s.dwell_s}});
  }
  write_manifest(ctx, manifest_path_for(out), "simulate",
                 {{"victim", cfg.victim.id},
                  {"interferer", cfg.interferer.id},
                  {"victim_power_dbw", cfg.victim_power_dbw},
                  {"noise_density_dbw_hz", cfg.noise_density_dbw_hz},
                  {"sample_rate_hz", cfg.sample_rate_hz},
                  {"shaping", a.shaping},
                  {"foc_power_dbw", foc_power_dbw(cfg.interferer)},
                  {"ssc_db_hz", r.ssc_db_hz},
                  {"stages", stages}},
                 config_paths(ctx, {a.profile == "default" || a.profile == "baseline" ? "" : a.profile}), a.seed,
                 {out.string()});
  std::printf("%-10s %9s %14s %14s\n", "stage", "t_start_s", "measured_dbhz", "predicted_dbhz");
  for (const auto& p : r.points) {
    const std::string m = p.measured.below_floor ? "below_floor" : fmt("%.2f", p.measured.cn0_dbhz);
    std::printf("%-10s %9.1f %14s %14.2f\n", p.label.c_str(), p.t_start_s, m.c_str(), p.predicted_cn0_dbhz);
  }
  std::printf("hysteresis_db %.3f\n", r.hysteresis_db);
  return kOk;
}

// ---------------------------------------------------------------- catalog

int cmd_catalog_validate(const Context& ctx, const std::string& path) {
  const std::string p = path.empty() ? ctx.catalog_path : path;
  const Catalog cat = load_catalog(p);
  std::size_t problems = 0;
  for (const auto& s : cat.signals) {
    for (const auto& v : validate_spec(s)) {
      std::cerr << "signal " << s.id << ": " << v.field << ": " << v.message << "\n";
      ++problems;
    }
  }
  for (const auto& [id, env] : cat.environments) {
    if (!cat.find_signal(id)) {
      std::cerr << "noise_environment " << id << ": victim not in catalog\n";
      ++problems;
    }
  }
  for (const auto& f : cat.fixed_ssc) {
    for (const auto& id : {f.victim_id, f.interferer_id}) {
      if (!cat.find_signal(id)) {
        std::cerr << "fixed_ssc " << f.victim_id << "/" << f.interferer_id << ": unknown signal " << id << "\n";
        ++problems;
      }
    }
  }
  if (problems > 0) throw ConfigError(std::to_string(problems) + " catalog problem(s) in " + p);
  std::cout << "ok " << p << ": " << cat.signals.size() << " signals, " << cat.environments.size()
            << " noise environments, " << cat.fixed_ssc.size() << " fixed SSCs, " << cat.constellations.size()
            << " constellations\n";
  return kOk;
}

int cmd_catalog_export(const Context& ctx, const std::string& output) {
  const Catalog cat = load_catalog(ctx.catalog_path);
  write_file_atomic(output, serialize_catalog(cat) + "\n");
  std::cout << "wrote " << output << "\n";
  return kOk;
}

int run(std::vector<std::string> args, bool allow_replay);

int cmd_replay(const std::string& manifest_path) {
  const RunManifest m = RunManifest::from_json([&] {
    try {
      return json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(manifest_path + ": " + e.what());
    }
  }());
  if (m.argv.empty()) throw ConfigError("manifest has no argv");
  return run(m.argv, false);
}

int run(std::vector<std::string> args, bool allow_replay) {
  CLI::App app{"RNSS compatibility analysis: spectra, SSC, C/N0 degradation, aggregation, simulation",
               "rnsscompat"};
  app.set_version_flag("--version", RNSSCOMPAT_VERSION);
  app.require_subcommand(1);
  Context ctx;
  ctx.argv = args;
  ctx.catalog_path = default_catalog();
  app.add_option("--catalog", ctx.catalog_path,
                 std::string("catalog JSON file or the built-in name (env ") + kCatalogEnvVar + ")");

  PsdArgs psd;
  auto* c_psd = app.add_subcommand("psd", "write a signal's normalized PSD as CSV");
  c_psd->add_option("--signal", psd.signal, "signal id")->required();
  c_psd->add_option("--span-hz,--span", psd.span_hz, "total grid width, Hz");
  c_psd->add_option("--spacing-hz", psd.spacing_hz, "analytic grid spacing, Hz");
  c_psd->add_option("--source", psd.source, "analytic | numeric");
  c_psd->add_option("--shaping", psd.shaping, "EFQPSK transition shaping: enhanced | sinusoidal");
  c_psd->add_option("--segment-length", psd.segment_length, "Welch segment length, samples");
  c_psd->add_option("--seed", psd.seed);
  c_psd->add_option("--output,-o", psd.output, "CSV path (default <signal>_psd.csv)");

  SscArgs ssc;
  auto* c_ssc = app.add_subcommand("ssc", "spectral separation coefficient of one interferer into one victim");
  c_ssc->add_option("--victim", ssc.victim);
  c_ssc->add_option("--interferer", ssc.interferer);
  c_ssc->add_option("--victim-psd", ssc.victim_psd, "victim PSD CSV instead of a catalog signal");
  c_ssc->add_option("--interferer-psd", ssc.interferer_psd, "interferer PSD CSV instead of a catalog signal");
  c_ssc->add_option("--offset-hz", ssc.offset_hz, "interferer minus victim centre frequency");
  c_ssc->add_option("--band-hz", ssc.band_hz, "integration band width centred on the victim");
  c_ssc->add_option("--source", ssc.source, "fixed | analytic | numeric");
  c_ssc->add_option("--shaping", ssc.shaping, "EFQPSK transition shaping: enhanced | sinusoidal");
  c_ssc->add_option("--seed", ssc.seed);
  c_ssc->add_option("--output,-o", ssc.output);

  DegradeArgs deg;
  auto* c_deg = app.add_subcommand("degrade", "C/N0 degradation report");
  c_deg->add_option("--interferer", deg.interferers, "interferer id (repeatable)")->required();
  c_deg->add_option("--victims", deg.victims, "'paper' or a comma-separated list of ids");
  c_deg->add_option("--ssc-source", deg.ssc_source, "fixed | analytic | numeric");
  c_deg->add_option("--env", deg.env_path, "JSON file with noise_environments overriding the catalog");
  c_deg->add_option("--rip-dbw", deg.rip_dbw, "override the interferer max single-satellite RIP (-inf: off)");
  c_deg->add_option("--g-agg-db", deg.g_agg_db, "override the interferer aggregation gain");
  c_deg->add_flag("--require-delta", deg.require_delta, "fail if any victim lacks a noise environment");
  c_deg->add_option("--seed", deg.seed);
  c_deg->add_option("--output-prefix,-o", deg.output_prefix, "writes <prefix>.csv and <prefix>.json");

  AggregateArgs agg;
  auto* c_agg = app.add_subcommand("aggregate", "aggregation gain of a constellation");
  c_agg->add_option("--constellation", agg.constellation);
  c_agg->add_option("--signal", agg.signal, "take the frequency from this signal (default X1)");
  c_agg->add_option("--freq-hz", agg.freq_hz);
  c_agg->add_option("--mask-deg", agg.mask_deg);
  c_agg->add_option("--lat-min-deg", agg.lat_min);
  c_agg->add_option("--lat-max-deg", agg.lat_max);
  c_agg->add_option("--lat-step-deg", agg.lat_step);
  c_agg->add_option("--lon-min-deg", agg.lon_min);
  c_agg->add_option("--lon-max-deg", agg.lon_max, "default: one plane spacing east of --lon-min-deg");
  c_agg->add_option("--lon-step-deg", agg.lon_step);
  c_agg->add_option("--time-step-s", agg.time_step_s);
  c_agg->add_option("--duration-s", agg.duration_s, "default: one orbital period");
  c_agg->add_option("--rx-pattern", agg.rx_pattern, "JSON array of {angle_deg, gain_dbi} by elevation");
  c_agg->add_option("--fixture", agg.fixture, "none | single | equal");
  c_agg->add_option("--count", agg.count, "satellites in the equal fixture");
  c_agg->add_option("--output,-o", agg.output);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "baseband power-ramp simulation");
  c_sim->add_option("--victim", sim.victim);
  c_sim->add_option("--interferer", sim.interferer);
  c_sim->add_option("--profile", sim.profile, "default | baseline | JSON file");
  c_sim->add_option("--dwell-s", sim.dwell_s);
  c_sim->add_option("--victim-power-dbw", sim.victim_power_dbw);
  c_sim->add_option("--noise-density-dbw-hz", sim.noise_density_dbw_hz);
  c_sim->add_option("--sample-rate-hz", sim.sample_rate_hz);
  c_sim->add_option("--shaping", sim.shaping, "EFQPSK transition shaping: enhanced | sinusoidal");
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--output,-o", sim.output);

  auto* c_cat = app.add_subcommand("catalog", "catalog utilities");
  c_cat->require_subcommand(1);
  std::string validate_path;
  auto* c_val = c_cat->add_subcommand("validate", "check a catalog file");
  c_val->add_option("path", validate_path, "catalog file (default --catalog)");
  std::string export_path = "catalog.json";
  auto* c_exp = c_cat->add_subcommand("export", "write the catalog as JSON");
  c_exp->add_option("--output,-o", export_path);

  std::string manifest;
  CLI::App* c_replay = nullptr;
  if (allow_replay) {
    c_replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    c_replay->add_option("manifest", manifest)->required();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (c_psd->parsed()) return cmd_psd(ctx, psd);
  if (c_ssc->parsed()) return cmd_ssc(ctx, ssc);
  if (c_deg->parsed()) return cmd_degrade(ctx, deg);
  if (c_agg->parsed()) return cmd_aggregate(ctx, agg);
  if (c_sim->parsed()) return cmd_simulate(ctx, sim);
  if (c_val->parsed()) return cmd_catalog_validate(ctx, validate_path);
  if (c_exp->parsed()) return cmd_catalog_export(ctx, export_path);
  if (c_replay && c_replay->parsed()) return cmd_replay(manifest);
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args, true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ComputationError& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputation;
  }
}
