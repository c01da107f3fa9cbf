// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rnsscompat/aggregation.hpp"
#include "rnsscompat/basebandsim.hpp"
#include "rnsscompat/catalog.hpp"
#include "rnsscompat/interference.hpp"
#include "rnsscompat/io.hpp"
#include "rnsscompat/spectrum.hpp"

using namespace rnsscompat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

void expect(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [miss]");
}

// Published four-victim columns.
struct Anchor {
  const char* victim;
  const char* interferer;
  double pre_noise;
  double i_alt;
  double delta;
};
const Anchor kAnchors[] = {{"GPS_L1CA", "X1", -198.15, -223.71, 0.01},
                           {"GAL_E1A", "X1", -200.02, -211.53, 0.30},
                           {"GPS_L5", "X5", -199.59, -212.24, 0.23},
                           {"GAL_E5", "X5", -199.85, -213.19, 0.20}};

Outcome noise_totals() {
  Outcome o;
  for (const auto& a : kAnchors) {
    const double t = total_noise_density(load_noise_environment(kPaperCatalogName, a.victim));
    expect(o, std::abs(t - a.pre_noise) <= 0.01, std::string(a.victim) + " " + fmt("%.3f", t));
  }
  return o;
}

Outcome i_alt_values() {
  Outcome o;
  const Catalog cat = builtin_catalog();
  for (const auto& a : kAnchors) {
    const SignalSpec& x = cat.signal(a.interferer);
    const double v = i_alt(x.max_single_sat_rip_dbw, x.aggregation_gain_db, cat.environment(a.victim)->l_proc_db,
                           *cat.fixed_ssc_for(a.victim, a.interferer));
    expect(o, std::abs(v - a.i_alt) <= 0.01, std::string(a.victim) + " " + fmt("%.3f", v));
  }
  return o;
}

Outcome degradation_values() {
  Outcome o;
  for (const auto& a : kAnchors) {
    const double d = cn0_degradation(a.i_alt, a.pre_noise);
    expect(o, std::abs(d - a.delta) <= 0.01, std::string(a.victim) + " " + fmt("%.4f", d));
  }
  return o;
}

int run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" RNSSCOMPAT_CLI "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome fixed_report() {
  Outcome o;
  // Independent oracle: filed powers and the published SSC column typed in here.
  struct Pair {
    const char* victim;
    const char* interferer;
    double ssc;
  };
  const Pair pairs[] = {{"GPS_L1CA", "X1", -97.41}, {"GPS_L1PY", "X1", -87.86}, {"GPS_L1M", "X1", -106.75},
                        {"GPS_L1C", "X1", -86.43},  {"WAAS_L1", "X1", -97.41},  {"GAL_E1A", "X1", -85.23},
                        {"GAL_E1BC", "X1", -86.43}, {"GPS_L2PY", "X5", -93.67}, {"GPS_L2M", "X5", -90.56},
                        {"GPS_L5", "X5", -85.04},   {"WAAS_L5", "X5", -85.04},  {"GAL_E5", "X5", -85.99},
                        {"GAL_E6BC", "X5", -104.77}, {"GAL_E6A", "X5", -96.16}};
  const std::map<std::string, std::pair<double, double>> power{{"X1", {-138.4, 13.1}}, {"X5", {-136.0, 9.8}}};
  const fs::path dir = fs::temp_directory_path() / ("rnsscompat_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const int rc = run_cli(dir, "degrade --interferer X1 --interferer X5 --victims paper --ssc-source fixed -o report");
  expect(o, rc == 0, "exit " + std::to_string(rc));
  if (rc != 0) return o;
  const auto doc = nlohmann::json::parse(read_text_file(dir / "report.json"));
  const auto& rows = doc.at("rows");
  expect(o, rows.size() == 14, std::to_string(rows.size()) + " rows");
  int matched = 0;
  int deltas = 0;
  for (const auto& p : pairs) {
    const auto& pw = power.at(p.interferer);
    const double oracle = pw.first + pw.second - 1.0 + p.ssc;
    for (const auto& r : rows) {
      if (r.at("victim") != p.victim || r.at("interferer") != p.interferer) continue;
      const double v = r.at("i_alt_dbw_hz").get<double>();
      if (std::abs(v - oracle) < 1e-9 && fmt("%.2f", v) == fmt("%.2f", oracle)) ++matched;
      for (const auto& a : kAnchors) {
        if (std::string(a.victim) == p.victim && !r.at("delta_cn0_db").is_null() &&
            std::abs(r.at("delta_cn0_db").get<double>() - a.delta) <= 0.01) {
          ++deltas;
        }
      }
    }
  }
  expect(o, matched == 14, std::to_string(matched) + "/14 I_alt match");
  expect(o, deltas == 4, std::to_string(deltas) + "/4 delta rows");
  std::error_code ec;
  fs::remove_all(dir, ec);
  return o;
}

Outcome computed_ssc() {
  Outcome o;
  const Catalog cat = builtin_catalog();
  const SpectralSettings st;
  const struct {
    const char* victim;
    const char* interferer;
    double published;
  } anchors[] = {{"GPS_L1CA", "X1", -97.41}, {"GAL_E1A", "X1", -85.23}, {"GPS_L5", "X5", -85.04}, {"GAL_E5", "X5", -85.99}};
  std::map<std::string, SampledPsd> interferer_psd;
  for (const char* id : {"X1", "X5"}) interferer_psd[id] = signal_psd(cat.signal(id), SscSource::kNumeric, st);
  for (const auto& a : anchors) {
    const SignalSpec& v = cat.signal(a.victim);
    const SignalSpec& i = cat.signal(a.interferer);
    const SampledPsd vp = signal_psd(v, SscSource::kAnalytic, st);
    const double ssc =
        compute_ssc(vp, interferer_psd.at(a.interferer), i.center_frequency_hz - v.center_frequency_hz).value_db_hz;
    expect(o, std::abs(ssc - a.published) <= 2.0,
           std::string(a.victim) + "/" + a.interferer + " " + fmt("%.2f", ssc) + " vs " + fmt("%.2f", a.published));
  }
  return o;
}

Outcome bandwidths() {
  Outcome o;
  const Catalog cat = builtin_catalog();
  for (const auto& [id, target] : std::vector<std::pair<const char*, double>>{{"X1", 1.8e6}, {"X5", 17.7e6}}) {
    const double bw = occupied_bandwidth(signal_psd(cat.signal(id), SscSource::kNumeric), 0.995);
    expect(o, std::abs(bw / target - 1.0) <= 0.10, std::string(id) + " " + fmt("%.3f", bw / 1e6) + " MHz");
  }
  return o;
}

Outcome envelope() {
  Outcome o;
  const std::size_t n = 100'000;
  const BasebandBuffer b = efqpsk_modulate(random_chips(n, 1, 1), random_chips(n, 1, 2), 16, 1.023e6);
  const double ripple = envelope_stats(b).ripple_db;
  expect(o, ripple <= 0.3, "ripple " + fmt("%.3f", ripple) + " dB over 1e5 chips");
  EfqpskOptions sin_opts;
  sin_opts.shaping = TransitionShaping::kSinusoidal;
  const double alt = envelope_stats(efqpsk_modulate(random_chips(n, 1, 1), random_chips(n, 1, 2), 16, 1.023e6, sin_opts))
                         .ripple_db;
  o.detail += "; sinusoidal-transition variant " + fmt("%.3f", alt) + " dB (informational)";
  return o;
}

Outcome spectrum_oracle() {
  Outcome o;
  const BasebandBuffer buf = bpsk_modulate(random_chips(1'000'000, 5, 0), 8, 1.023e6);
  const SampledPsd num = numeric_psd(buf, 4096);
  // sinc squared as seen at the sample rate (folded).
  const SampledPsd ref = analytic_psd(BpskR{1.023e6}, num.grid, std::nullopt, buf.sample_rate);
  const double peak = *std::max_element(ref.density.begin(), ref.density.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < num.grid.size(); ++i) {
    if (ref.density[i] < 1e-4 * peak) continue;
    worst = std::max(worst, std::abs(10.0 * std::log10(num.density[i] / ref.density[i])));
  }
  expect(o, worst <= 0.5, "max deviation " + fmt("%.3f", worst) + " dB");
  const Periodogram p = welch_periodogram(buf, 4096);
  double freq_power = 0.0;
  for (double d : p.density) freq_power += d * (p.grid[1] - p.grid[0]);
  const double time_power = envelope_stats(buf).mean_power;
  expect(o, std::abs(freq_power / time_power - 1.0) <= 0.01,
         "Parseval ratio " + fmt("%.5f", freq_power / time_power));
  return o;
}

Outcome simulator() {
  Outcome o;
  const Catalog cat = builtin_catalog();
  ScenarioConfig cfg;
  cfg.victim = cat.signal("GPS_L5");
  cfg.interferer = cat.signal("X5");
  cfg.victim_power_dbw = kDefaultNoiseDensityDbwHz + 45.0;
  const RampProfile profile{{{"baseline", kAbsentDb, 1.0}, {"FOC+20", 20.0, 1.0}, {"baseline", kAbsentDb, 0.2}}};
  const int runs = 20;
  double sum_err = 0.0, sum_base = 0.0, worst_base = 0.0, predicted = 0.0;
  std::vector<double> errs;
  for (int k = 0; k < runs; ++k) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(k);
    const RampResult r = run_ramp_profile(cfg, profile);
    const double measured = r.points[0].measured.cn0_dbhz - r.points[1].measured.cn0_dbhz;
    predicted = r.points[0].predicted_cn0_dbhz - r.points[1].predicted_cn0_dbhz;
    errs.push_back(measured - predicted);
    sum_err += measured - predicted;
    sum_base += r.points[0].measured.cn0_dbhz;
    worst_base = std::max(worst_base, std::abs(r.points[0].measured.cn0_dbhz - 45.0));
  }
  const double mean_err = sum_err / runs;
  const double mean_base = sum_base / runs;
  double var = 0.0;
  for (double e : errs) var += (e - mean_err) * (e - mean_err);
  const double sd = std::sqrt(var / (runs - 1));
  expect(o, std::abs(mean_err) <= 0.3,
         "FOC+20 predicted loss " + fmt("%.2f", predicted) + " dB, mean error " + fmt("%+.3f", mean_err) +
             " dB over 20 runs (per-run sd " + fmt("%.2f", sd) + ")");
  expect(o, std::abs(mean_base - 45.0) <= 0.5 && worst_base <= 0.5,
         "baseline mean " + fmt("%.2f", mean_base) + " dB-Hz, worst run off by " + fmt("%.2f", worst_base));
  return o;
}

Outcome aggregation() {
  Outcome o;
  const Catalog cat = builtin_catalog();
  const ConstellationSpec& shell = cat.constellations.front();
  const std::vector<UserPoint> origin{{0.0, 0.0, 5.0, AntennaPattern::isotropic()}};
  std::vector<SatState> sats;
  for (int k = 0; k < 16; ++k) sats.push_back({{orbital_radius(shell), 0.0, 0.0}, 0, k});
  const double single = aggregation_gain(shell, {sats[0]}, origin, 0.0, 1.5e9).g_agg_db;
  expect(o, single == 0.0, "single " + fmt("%.3g", single));
  const double equal = aggregation_gain(shell, sats, origin, 0.0, 1.5e9).g_agg_db;
  expect(o, std::abs(equal - 10.0 * std::log10(16.0)) <= 0.01, "16 equal " + fmt("%.4f", equal));

  const auto users = user_grid(0.0, 85.0, 5.0, 0.0, 360.0 / shell.planes, 5.0, 5.0);
  const auto times = time_grid(orbital_period(shell), 30.0);
  for (const auto& [id, filed] : std::vector<std::pair<const char*, double>>{{"X1", 13.1}, {"X5", 9.8}}) {
    const auto r = aggregation_gain(shell, users, times, cat.signal(id).center_frequency_hz);
    const double bound = 10.0 * std::log10(r.max_visible_count);
    expect(o, r.g_agg_db <= bound, std::string(id) + " g_agg " + fmt("%.2f", r.g_agg_db) + " <= " + fmt("%.2f", bound));
    expect(o, std::abs(r.g_agg_db - filed) <= 3.0, "within 3 dB of " + fmt("%.1f", filed));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "noise aggregation totals", 1.0, noise_totals},
      {2, "I_alt values", 1.0, i_alt_values},
      {3, "C/N0 degradation values", 1.0, degradation_values},
      {4, "fixed-table degrade report", 1.0, fixed_report},
      {5, "computed SSC anchors", 30.0, computed_ssc},
      {6, "EFQPSK 99.5% bandwidths", 30.0, bandwidths},
      {7, "EFQPSK constant envelope", 10.0, envelope},
      {8, "numeric PSD vs sinc squared", 10.0, spectrum_oracle},
      {9, "simulator vs theory", 300.0, simulator},
      {10, "aggregation gain properties", 120.0, aggregation},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  return failed;
}
