#include "doctest.h"

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "rnsscompat/catalog.hpp"
#include "rnsscompat/error.hpp"
#include "rnsscompat/interference.hpp"

using namespace rnsscompat;

namespace {

SampledPsd flat_psd(double width, double half_span, double spacing) {
  SampledPsd p;
  p.grid = symmetric_grid(half_span, spacing);
  for (double f : p.grid) p.density.push_back(std::abs(f) <= 0.5 * width + 1e-9 ? 1.0 / width : 0.0);
  p.normalization_band = p.coverage();
  return p;
}

NoiseEnvironment env_of(const char* id) { return load_noise_environment(kPaperCatalogName, id); }

}  // namespace

TEST_CASE("SSC of identical flat spectra") {
  const SampledPsd p = flat_psd(1e6, 2e6, 1e3);
  CHECK(compute_ssc(p, p, 0.0).value_db_hz == doctest::Approx(-60.0).epsilon(1e-4));
}

TEST_CASE("disjoint spectra hit the floor") {
  const SampledPsd p = flat_psd(1e6, 2e6, 1e3);
  const SscResult r = compute_ssc(p, p, 1.5e6);
  CHECK(r.value_db_hz == kSscFloorDbHz);
}

TEST_CASE("band outside a grid is a configuration error") {
  const SampledPsd p = flat_psd(1e6, 2e6, 1e3);
  CHECK_THROWS_AS(compute_ssc(p, p, 0.0, FrequencyBand::centered(10e6)), ConfigError);
  CHECK_THROWS_AS(compute_ssc(p, p, 1.5e6, FrequencyBand::centered(2e6)), ConfigError);
}

TEST_CASE("SSC symmetry") {
  const auto grid = symmetric_grid(30e6, 1e3);
  const SampledPsd a = analytic_psd(BocCos{15.345e6, 2.5575e6}, grid);
  const SampledPsd b = analytic_psd(BpskR{1.023e6}, grid);
  const FrequencyBand band = FrequencyBand::centered(20e6);
  const double ab = compute_ssc(a, b, 3e6, band).value_db_hz;
  const double ba = compute_ssc(b, a, -3e6, FrequencyBand{-13e6, 7e6}).value_db_hz;
  CHECK(std::abs(ab - ba) < 0.01);
  CHECK(std::abs(compute_ssc(a, b, 0.0).value_db_hz - compute_ssc(b, a, 0.0).value_db_hz) < 0.01);
}

TEST_CASE("total noise density") {
  CHECK(total_noise_density(env_of("GPS_L1CA")) == doctest::Approx(-198.15).epsilon(0.01 / 198.15));
  CHECK(std::abs(total_noise_density(env_of("GAL_E5")) - -199.85) < 0.01);
  NoiseEnvironment two;
  two.n0_dbw_hz = -200.0;
  two.i_ext_dbw_hz = -200.0;
  CHECK(total_noise_density(two) == doctest::Approx(-200.0 + 10.0 * std::log10(2.0)));
  CHECK(total_noise_density(two, kAbsentDb) == total_noise_density(two));
}

TEST_CASE("i_alt") {
  CHECK(std::abs(i_alt(-138.4, 13.1, 1.0, -85.23) - -211.53) < 1e-9);
  CHECK(std::abs(i_alt(-136.0, 9.8, 1.0, -85.04) - -212.24) < 1e-9);
  CHECK(is_absent(i_alt(kAbsentDb, 13.1, 1.0, -85.0)));
}

TEST_CASE("effective C/N0") {
  NoiseEnvironment l1 = env_of("GPS_L1CA");
  CHECK(std::abs(effective_cn0(-158.5, l1) - 39.65) < 0.01);
  CHECK(effective_cn0(-158.5, l1, kAbsentDb) == effective_cn0(-158.5, l1));
  const double pre = total_noise_density(l1);
  CHECK(effective_cn0(-158.5, l1) - effective_cn0(-158.5, l1, pre) == doctest::Approx(10.0 * std::log10(2.0)));
}

TEST_CASE("C/N0 degradation") {
  CHECK(std::abs(cn0_degradation(-211.53, -200.02) - 0.30) < 0.01);
  CHECK(std::abs(cn0_degradation(-223.71, -198.15) - 0.01) < 0.005);
  CHECK(std::abs(cn0_degradation(-212.24, -199.59) - 0.23) < 0.01);
  CHECK(cn0_degradation(kAbsentDb, -199.0) == 0.0);

  double prev = 0.0;
  for (double i = -240.0; i <= -180.0; i += 1.0) {
    const double d = cn0_degradation(i, -200.0);
    CHECK(d > prev);
    prev = d;
  }
  for (double n = -210.0; n < -190.0; n += 1.0) CHECK(cn0_degradation(-205.0, n + 1.0) < cn0_degradation(-205.0, n));
}

TEST_CASE("composition of effective C/N0 and degradation") {
  for (const char* id : {"GPS_L1CA", "GAL_E1A", "GPS_L5", "GAL_E5"}) {
    const NoiseEnvironment env = env_of(id);
    const double ia = -211.0;
    const double diff = effective_cn0(-158.5, env) - effective_cn0(-158.5, env, ia);
    CHECK(diff == doctest::Approx(cn0_degradation(ia, total_noise_density(env))).epsilon(1e-12));
  }
}

TEST_CASE("dB round trip") {
  for (double x : {1e-21, 3.7e-3, 1.0, 42.0, 1e9}) {
    CHECK(std::abs(db_to_linear(linear_to_db(x)) / x - 1.0) < 1e-12);
  }
}

TEST_CASE("fixed-table report reproduces the published degradation rows") {
  const Catalog cat = builtin_catalog();
  ReportOptions opts;
  opts.fixed_table = cat.fixed_ssc;
  struct Expect {
    const char* interferer;
    const char* victim;
    double i_alt;
    double delta;
  };
  const Expect rows[] = {{"X1", "GPS_L1CA", -223.71, 0.01},
                         {"X1", "GAL_E1A", -211.53, 0.30},
                         {"X5", "GPS_L5", -212.24, 0.23},
                         {"X5", "GAL_E5", -213.19, 0.20}};
  for (const auto& e : rows) {
    std::vector<SignalSpec> victims;
    for (const auto& id : cat.fixed_table_victims(e.interferer)) victims.push_back(cat.signal(id));
    const DegradationReport r = build_report(victims, cat.signal(e.interferer), cat.environments, opts);
    CHECK(r.rows.size() == 7);
    for (std::size_t k = 1; k < r.rows.size(); ++k) CHECK(r.rows[k - 1].victim_id <= r.rows[k].victim_id);
    bool found = false;
    for (const auto& row : r.rows) {
      if (row.victim_id != e.victim) continue;
      found = true;
      CHECK(std::abs(row.i_alt_dbw_hz - e.i_alt) < 0.01);
      REQUIRE(row.delta_cn0_db.has_value());
      CHECK(std::abs(*row.delta_cn0_db - e.delta) < 0.01);
      CHECK(*row.delta_cn0_db >= 0.0);
    }
    CHECK(found);
  }
}

TEST_CASE("victims without an environment get SSC and I_alt only") {
  const Catalog cat = builtin_catalog();
  ReportOptions opts;
  opts.fixed_table = cat.fixed_ssc;
  const DegradationReport r = build_report({cat.signal("GPS_L1PY")}, cat.signal("X1"), cat.environments, opts);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].ssc_db_hz == -87.86);
  CHECK(std::abs(r.rows[0].i_alt_dbw_hz - (-138.4 + 13.1 - 1.0 - 87.86)) < 1e-9);
  CHECK_FALSE(r.rows[0].delta_cn0_db.has_value());
}

TEST_CASE("switched-off interferer gives zero degradation") {
  const Catalog cat = builtin_catalog();
  ReportOptions opts;
  opts.fixed_table = cat.fixed_ssc;
  SignalSpec x5 = cat.signal("X5");
  x5.max_single_sat_rip_dbw = kAbsentDb;
  const DegradationReport r = build_report({cat.signal("GPS_L5"), cat.signal("GAL_E5")}, x5, cat.environments, opts);
  for (const auto& row : r.rows) CHECK(*row.delta_cn0_db == 0.0);
}

TEST_CASE("fixed mode needs a table entry") {
  const Catalog cat = builtin_catalog();
  ReportOptions opts;
  opts.fixed_table = cat.fixed_ssc;
  CHECK_THROWS_AS(build_report({cat.signal("GPS_L5")}, cat.signal("X1"), cat.environments, opts), ConfigError);
  CHECK_THROWS_AS(parse_ssc_source("psd"), ConfigError);
  CHECK(parse_ssc_source("numeric") == SscSource::kNumeric);
}

TEST_CASE("report serialization") {
  const Catalog cat = builtin_catalog();
  ReportOptions opts;
  opts.fixed_table = cat.fixed_ssc;
  const DegradationReport r =
      build_report({cat.signal("GPS_L1CA"), cat.signal("GPS_L1PY")}, cat.signal("X1"), cat.environments, opts);
  std::ostringstream csv;
  write_report_csv(csv, r);
  const std::string text = csv.str();
  CHECK(text.rfind("victim,interferer,ssc_db_hz,i_alt_dbw_hz,pre_noise_dbw_hz,delta_cn0_db", 0) == 0);
  CHECK(text.find("GPS_L1PY,X1,-87.8600,-214.1600,,,,") != std::string::npos);

  std::ostringstream js;
  write_report_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j.at("ssc_source") == "fixed");
  CHECK(j.at("sign_convention").get<std::string>().find("non-negative") != std::string::npos);
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows")[1].at("delta_cn0_db").is_null());
}

TEST_CASE("computed SSCs land near the published values") {
  const Catalog cat = builtin_catalog();
  SpectralSettings st;
  const double e1a = signal_ssc(cat.signal("GAL_E1A"), cat.signal("X1"), SscSource::kAnalytic, st).value_db_hz;
  CHECK(std::abs(e1a - -85.23) < 2.0);
  CHECK_THROWS_AS(signal_ssc(cat.signal("GAL_E1A"), cat.signal("X1"), SscSource::kFixed, st), ConfigError);
}
