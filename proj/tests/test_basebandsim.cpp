#include "doctest.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "rnsscompat/basebandsim.hpp"
#include "rnsscompat/error.hpp"

using namespace rnsscompat;

namespace {

ScenarioConfig l5_scenario() {
  const Catalog cat = builtin_catalog();
  ScenarioConfig cfg;
  cfg.victim = cat.signal("GPS_L5");
  cfg.interferer = cat.signal("X5");
  return cfg;
}

double mean_power_db(const BasebandBuffer& b) { return linear_to_db(envelope_stats(b).mean_power); }

Cn0Estimate measure(const ScenarioConfig& cfg, double dwell_s) {
  const RampResult r = run_ramp_profile(cfg, RampProfile{{{"baseline", kAbsentDb, dwell_s}}});
  return r.points.front().measured;
}

double stddev(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("scenario validation") {
  ScenarioConfig cfg = l5_scenario();
  CHECK_NOTHROW(validate_scenario(cfg));
  ScenarioConfig slow = cfg;
  slow.sample_rate_hz = 40.92e6;
  CHECK_THROWS_AS(validate_scenario(slow), ConfigError);
  ScenarioConfig odd = cfg;
  odd.sample_rate_hz = 62e6;
  CHECK_THROWS_AS(validate_scenario(odd), ConfigError);
  ScenarioConfig brief = cfg;
  brief.duration_s = 0.05;
  CHECK_THROWS_AS(validate_scenario(brief), ConfigError);
  ScenarioConfig boc = cfg;
  boc.victim = builtin_catalog().signal("GAL_E1A");
  CHECK_THROWS_AS(validate_scenario(boc), ConfigError);
  ScenarioConfig bpsk_interferer = cfg;
  bpsk_interferer.interferer = builtin_catalog().signal("GPS_L1CA");
  bpsk_interferer.interferer_power_dbw = -120.0;
  CHECK_THROWS_AS(validate_scenario(bpsk_interferer), ConfigError);
}

TEST_CASE("each component is power calibrated") {
  ScenarioConfig noise = l5_scenario();
  noise.victim_power_dbw = kAbsentDb;
  CHECK(std::abs(mean_power_db(synthesize_scenario(noise)) -
                 (noise.noise_density_dbw_hz + linear_to_db(noise.sample_rate_hz))) < 0.05);

  ScenarioConfig victim = l5_scenario();
  victim.noise_density_dbw_hz = kAbsentDb;
  CHECK(std::abs(mean_power_db(synthesize_scenario(victim)) - victim.victim_power_dbw) < 0.05);

  ScenarioConfig interferer = l5_scenario();
  interferer.victim_power_dbw = kAbsentDb;
  interferer.noise_density_dbw_hz = kAbsentDb;
  interferer.interferer_power_dbw = -120.0;
  CHECK(std::abs(mean_power_db(synthesize_scenario(interferer)) - -120.0) < 0.05);
}

TEST_CASE("same seed gives an identical buffer") {
  ScenarioConfig cfg = l5_scenario();
  cfg.interferer_power_dbw = -125.0;
  const auto a = synthesize_scenario(cfg);
  const auto b = synthesize_scenario(cfg);
  CHECK(a.samples == b.samples);
  cfg.seed = 2;
  CHECK_FALSE(synthesize_scenario(cfg).samples == a.samples);
}

TEST_CASE("estimate_cn0 on a synthesized buffer") {
  ScenarioConfig cfg = l5_scenario();
  cfg.victim_power_dbw = -158.5;
  cfg.duration_s = 0.2;
  const BasebandBuffer buf = synthesize_scenario(cfg);
  const Replica rep{victim_code(cfg.victim, cfg.victim_prn), chip_rate_of(cfg.victim.modulation)};
  const Cn0Estimate e = estimate_cn0(buf, rep, 1e-3, 200);
  CHECK(e.epochs == 200);
  CHECK(std::abs(e.cn0_dbhz - 41.8) < 1.0);
  CHECK_THROWS_AS(estimate_cn0(buf, rep, 1.5e-3, 100), ConfigError);
  CHECK_THROWS_AS(estimate_cn0(buf, rep, 1e-3, 1000), ConfigError);
  CHECK_NOTHROW(estimate_cn0(buf, rep, 2e-3, 50));
}

TEST_CASE("estimator is unbiased at 45 dB-Hz and linear in victim power") {
  ScenarioConfig cfg = l5_scenario();
  cfg.victim_power_dbw = -155.3;
  const Cn0Estimate e = measure(cfg, 2.0);
  CHECK(e.epochs == 2000);
  CHECK(std::abs(e.cn0_dbhz - 45.0) < 0.5);
  cfg.victim_power_dbw += 10.0 * std::log10(2.0);
  const Cn0Estimate d = measure(cfg, 2.0);
  CHECK(std::abs(d.cn0_dbhz - e.cn0_dbhz - 3.01) < 0.3);
}

TEST_CASE("absent victim falls below the floor") {
  ScenarioConfig cfg = l5_scenario();
  cfg.victim_power_dbw = kAbsentDb;
  const Cn0Estimate e = measure(cfg, 0.2);
  CHECK(e.below_floor);
  std::ostringstream out;
  RampResult r;
  RampPoint p;
  p.label = "baseline";
  p.measured = e;
  r.points.push_back(p);
  write_ramp_csv(out, r);
  CHECK(out.str() == "stage,t_start_s,measured_cn0_dbhz,predicted_cn0_dbhz\nbaseline,0.000,below_floor,0.0000\n");
}

TEST_CASE("estimator spread shrinks as one over root n") {
  const double t = 1e-3, cn0 = db_to_linear(40.0);
  // Prompt = sqrt(C T^2) + complex noise of variance T per rail (N0 = 1 units).
  const double amp = std::sqrt(cn0) * t;
  const double sigma = std::sqrt(t / 2.0);
  std::vector<double> spreads;
  std::uint64_t seed = 1;
  for (std::size_t n : {400, 1600, 6400}) {
    std::vector<double> est;
    for (int trial = 0; trial < 200; ++trial) {
      CounterRng rng(seed++, 77);
      NwprEstimator e;
      for (std::size_t k = 0; k < n; ++k) {
        const auto [a, b] = rng.gaussian_pair();
        e.add({amp + sigma * a, sigma * b});
      }
      est.push_back(e.estimate(t).cn0_dbhz);
    }
    spreads.push_back(stddev(est));
  }
  for (std::size_t k = 1; k < spreads.size(); ++k) {
    const double ratio = spreads[k - 1] / spreads[k];
    CHECK(ratio > 2.0 / 1.5);
    CHECK(ratio < 2.0 * 1.5);
  }
}

TEST_CASE("ramp profiles") {
  const RampProfile p = RampProfile::standard();
  REQUIRE(p.stages.size() == 9);
  CHECK(p.stages.front().label == "baseline");
  CHECK(p.stages.back().label == "baseline");
  CHECK(p.stages[3].interferer_offset_db == 0.0);
  CHECK(p.stages[7].interferer_offset_db == 30.0);
  CHECK_NOTHROW(validate_profile(p));
  CHECK_THROWS_AS(validate_profile(RampProfile{}), ConfigError);
  CHECK_THROWS_AS(validate_profile(RampProfile{{{"FOC", 0.0, 1.0}, {"baseline", kAbsentDb, 1.0}}}), ConfigError);
  CHECK(foc_power_dbw(builtin_catalog().signal("X5")) == doctest::Approx(-136.0 + 9.8));
}

TEST_CASE("all-baseline profile is flat") {
  ScenarioConfig cfg = l5_scenario();
  cfg.victim_power_dbw = -155.3;
  const RampProfile p{{{"baseline", kAbsentDb, 0.5}, {"baseline", kAbsentDb, 0.5}, {"baseline", kAbsentDb, 0.5}}};
  const RampResult r = run_ramp_profile(cfg, p);
  REQUIRE(r.points.size() == 3);
  CHECK(std::abs(r.hysteresis_db) < 0.3);
  for (const auto& pt : r.points) CHECK(pt.predicted_cn0_dbhz == doctest::Approx(45.0));
  CHECK(r.points[1].t_start_s == doctest::Approx(0.5));
}
