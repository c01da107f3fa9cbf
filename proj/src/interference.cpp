#include "rnsscompat/interference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "rnsscompat/error.hpp"
#include "rnsscompat/waveform.hpp"

namespace rnsscompat {

namespace {

using nlohmann::json;

std::uint64_t stream_id(std::string_view id) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canonical_key(id)) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return h;
}

const NoiseEnvironment* find_env(const std::map<std::string, NoiseEnvironment>& envs, const SignalSpec& v) {
  if (auto it = envs.find(v.id); it != envs.end()) return &it->second;
  const std::string key = canonical_key(v.id);
  for (const auto& [id, env] : envs) {
    if (canonical_key(id) == key) return &env;
  }
  return nullptr;
}

std::optional<double> fixed_lookup(const std::vector<FixedSscEntry>& table, const SignalSpec& victim,
                                   const SignalSpec& interferer) {
  const std::string v = canonical_key(victim.id);
  const std::string i = canonical_key(interferer.id);
  for (const auto& e : table) {
    if (canonical_key(e.victim_id) == v && canonical_key(e.interferer_id) == i) return e.ssc_db_hz;
  }
  return std::nullopt;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isinf(*v)) return *v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

json json_value(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

SscResult compute_ssc(const SampledPsd& victim, const SampledPsd& interferer, double freq_offset_hz,
                      std::optional<FrequencyBand> integration_band) {
  if (victim.grid.size() < 2 || interferer.grid.size() < 2) {
    throw ConfigError("compute_ssc: PSD grids need at least two points");
  }
  const FrequencyBand vcov = victim.coverage();
  const FrequencyBand icov{interferer.grid.front() + freq_offset_hz, interferer.grid.back() + freq_offset_hz};
  SscResult r;
  r.frequency_offset_hz = freq_offset_hz;
  r.grid_spacing_hz = victim.spacing();
  FrequencyBand band;
  if (integration_band) {
    band = *integration_band;
    const double tol = 1e-6 * std::max(1.0, band.width());
    if (band.low_hz < vcov.low_hz - tol || band.high_hz > vcov.high_hz + tol) {
      throw ConfigError("compute_ssc: victim grid does not cover the integration band");
    }
    if (band.low_hz < icov.low_hz - tol || band.high_hz > icov.high_hz + tol) {
      throw ConfigError("compute_ssc: shifted interferer grid does not cover the integration band");
    }
  } else {
    band = {std::max(vcov.low_hz, icov.low_hz), std::min(vcov.high_hz, icov.high_hz)};
  }
  r.integration_band = band;
  if (!(band.high_hz > band.low_hz)) return r;

  auto product = [&](double f) { return victim.at(f) * interferer.at(f - freq_offset_hz); };
  const double df = victim.spacing();
  const auto first = static_cast<long long>(std::ceil((band.low_hz - vcov.low_hz) / df));
  const auto last = static_cast<long long>(std::floor((band.high_hz - vcov.low_hz) / df));
  double sum = 0.0;
  double prev_f = band.low_hz;
  double prev_v = product(band.low_hz);
  for (long long i = std::max(0LL, first); i <= last && i < static_cast<long long>(victim.grid.size()); ++i) {
    const double f = victim.grid[static_cast<std::size_t>(i)];
    if (f <= prev_f || f >= band.high_hz) continue;
    const double v = victim.density[static_cast<std::size_t>(i)] * interferer.at(f - freq_offset_hz);
    sum += 0.5 * (prev_v + v) * (f - prev_f);
    prev_f = f;
    prev_v = v;
  }
  sum += 0.5 * (prev_v + product(band.high_hz)) * (band.high_hz - prev_f);
  if (sum > 0.0) {
    const double db = linear_to_db(sum);
    r.value_db_hz = std::max(db, kSscFloorDbHz);
  }
  return r;
}

double total_noise_density(const NoiseEnvironment& env, std::optional<double> extra) {
  double sum = 0.0;
  for (double c : {env.n0_dbw_hz, env.i_ext_dbw_hz, env.i_ref_dbw_hz, env.i_rem_dbw_hz}) {
    if (std::isfinite(c)) sum += db_to_linear(c);
  }
  if (extra && std::isfinite(*extra)) sum += db_to_linear(*extra);
  return linear_to_db(sum);
}

double i_alt(double rip_dbw, double g_agg_db, double l_proc_db, double ssc_db_hz) {
  if (is_absent(rip_dbw)) return kAbsentDb;
  return rip_dbw + g_agg_db - l_proc_db + ssc_db_hz;
}

double effective_cn0(double carrier_dbw, const NoiseEnvironment& env, std::optional<double> added_dbw_hz) {
  return carrier_dbw - total_noise_density(env, added_dbw_hz);
}

double cn0_degradation(double i_alt_dbw_hz, double pre_noise_total_dbw_hz) {
  if (is_absent(i_alt_dbw_hz)) return 0.0;
  return 10.0 * std::log10(1.0 + db_to_linear(i_alt_dbw_hz - pre_noise_total_dbw_hz));
}

std::string to_string(SscSource source) {
  switch (source) {
    case SscSource::kFixed: return "fixed";
    case SscSource::kAnalytic: return "analytic";
    case SscSource::kNumeric: return "numeric";
  }
  return "fixed";
}

SscSource parse_ssc_source(std::string_view text) {
  if (text == "fixed") return SscSource::kFixed;
  if (text == "analytic") return SscSource::kAnalytic;
  if (text == "numeric") return SscSource::kNumeric;
  throw ConfigError("unknown SSC source '" + std::string(text) + "' (expected fixed, analytic or numeric)");
}

SampledPsd signal_psd(const SignalSpec& signal, SscSource source, const SpectralSettings& s) {
  const ModulationKind& mod = signal.modulation;
  const double rc = chip_rate_of(mod);
  const std::uint64_t stream = stream_id(signal.id);
  if (const auto* e = std::get_if<Efqpsk>(&mod)) {
    const int spc = std::max(8, static_cast<int>(std::lround(s.sample_rate_hz / e->chip_rate)));
    const std::size_t n = std::max<std::size_t>(s.target_samples / static_cast<std::size_t>(spc), 64);
    EfqpskOptions opts;
    opts.shaping = s.efqpsk_shaping;
    const BasebandBuffer buf = efqpsk_modulate(random_chips(n, s.seed, 2 * stream),
                                               random_chips(n, s.seed, 2 * stream + 1), spc, e->chip_rate, opts);
    return numeric_psd(buf, s.segment_length);
  }
  const bool sampled = source == SscSource::kNumeric && !std::holds_alternative<AltBoc>(mod);
  if (!sampled) {
    return analytic_psd(mod, symmetric_grid(s.grid_half_span_hz, s.grid_spacing_hz));
  }
  const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(s.target_samples) * rc / s.sample_rate_hz));
  const BasebandBuffer buf = modulate_chips(mod, random_chips(n, s.seed, 2 * stream),
                                            random_chips(n, s.seed, 2 * stream + 1), s.sample_rate_hz);
  return numeric_psd(buf, s.segment_length);
}

SscResult signal_ssc(const SignalSpec& victim, const SignalSpec& interferer, SscSource source,
                     const SpectralSettings& settings, std::optional<FrequencyBand> integration_band) {
  if (source == SscSource::kFixed) throw ConfigError("signal_ssc: fixed SSCs come from the table");
  const SampledPsd v = signal_psd(victim, source, settings);
  const SampledPsd i = signal_psd(interferer, source, settings);
  SscResult r = compute_ssc(v, i, interferer.center_frequency_hz - victim.center_frequency_hz, integration_band);
  r.victim_id = victim.id;
  r.interferer_id = interferer.id;
  return r;
}

DegradationReport build_report(const std::vector<SignalSpec>& victims, const SignalSpec& interferer,
                               const std::map<std::string, NoiseEnvironment>& envs,
                               const ReportOptions& options) {
  DegradationReport report;
  report.ssc_source = options.ssc_source;
  std::optional<SampledPsd> interferer_psd;
  for (const SignalSpec& victim : victims) {
    DegradationRow row;
    row.victim_id = victim.id;
    row.interferer_id = interferer.id;
    if (options.ssc_source == SscSource::kFixed) {
      const auto v = fixed_lookup(options.fixed_table, victim, interferer);
      if (!v) {
        throw ConfigError("no fixed SSC for victim '" + victim.id + "' and interferer '" + interferer.id + "'");
      }
      row.ssc_db_hz = *v;
    } else {
      if (!interferer_psd) interferer_psd = signal_psd(interferer, options.ssc_source, options.spectral);
      const SampledPsd vpsd = signal_psd(victim, options.ssc_source, options.spectral);
      row.ssc_db_hz =
          compute_ssc(vpsd, *interferer_psd, interferer.center_frequency_hz - victim.center_frequency_hz).value_db_hz;
    }
    const NoiseEnvironment* env = find_env(envs, victim);
    const double l_proc = env ? env->l_proc_db : options.default_l_proc_db;
    row.i_alt_dbw_hz = i_alt(interferer.max_single_sat_rip_dbw, interferer.aggregation_gain_db, l_proc, row.ssc_db_hz);
    if (env) {
      row.pre_noise_total_dbw_hz = total_noise_density(*env);
      row.delta_cn0_db = cn0_degradation(row.i_alt_dbw_hz, *row.pre_noise_total_dbw_hz);
      if (victim.carrier_power_dbw) {
        row.effective_cn0_before_dbhz = effective_cn0(*victim.carrier_power_dbw, *env);
        row.effective_cn0_after_dbhz = effective_cn0(*victim.carrier_power_dbw, *env, row.i_alt_dbw_hz);
      }
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const DegradationRow& a, const DegradationRow& b) { return a.victim_id < b.victim_id; });
  return report;
}

void write_report_csv(std::ostream& out, const DegradationReport& report) {
  out << "victim,interferer,ssc_db_hz,i_alt_dbw_hz,pre_noise_dbw_hz,delta_cn0_db,cn0_before_dbhz,cn0_after_dbhz\n";
  for (const auto& r : report.rows) {
    out << r.victim_id << ',' << r.interferer_id << ',' << cell(r.ssc_db_hz) << ',' << cell(r.i_alt_dbw_hz) << ','
        << cell(r.pre_noise_total_dbw_hz) << ',' << cell(r.delta_cn0_db) << ',' << cell(r.effective_cn0_before_dbhz)
        << ',' << cell(r.effective_cn0_after_dbhz) << '\n';
  }
}

void write_report_json(std::ostream& out, const DegradationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"victim", r.victim_id},
                    {"interferer", r.interferer_id},
                    {"ssc_db_hz", r.ssc_db_hz},
                    {"i_alt_dbw_hz", json_value(r.i_alt_dbw_hz)},
                    {"pre_noise_dbw_hz", json_value(r.pre_noise_total_dbw_hz)},
                    {"delta_cn0_db", json_value(r.delta_cn0_db)},
                    {"cn0_before_dbhz", json_value(r.effective_cn0_before_dbhz)},
                    {"cn0_after_dbhz", json_value(r.effective_cn0_after_dbhz)}});
  }
  json doc = {{"ssc_source", to_string(report.ssc_source)},
              {"sign_convention", "delta_cn0_db is a non-negative loss; tables print it negated"},
              {"rows", rows}};
  out << doc.dump(2) << '\n';
}

}  // namespace rnsscompat
