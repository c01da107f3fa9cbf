#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "rnsscompat/error.hpp"
#include "rnsscompat/interference.hpp"
#include "rnsscompat/spectrum.hpp"

using namespace rnsscompat;

namespace {

SampledPsd flat_psd(double width, double half_span, double spacing) {
  SampledPsd p;
  p.grid = symmetric_grid(half_span, spacing);
  for (double f : p.grid) p.density.push_back(std::abs(f) <= 0.5 * width + 1e-9 ? 1.0 / width : 0.0);
  p.normalization_band = p.coverage();
  return p;
}

BasebandBuffer random_bpsk(std::size_t chips, int spc, std::uint64_t seed) {
  return bpsk_modulate(random_chips(chips, seed, 0), spc, 1.023e6);
}

}  // namespace

TEST_CASE("analytic density examples") {
  CHECK(analytic_density(BpskR{1.023e6}, 0.0) == doctest::Approx(1.0 / 1.023e6));
  CHECK(analytic_density(BpskR{1.023e6}, 0.0) == doctest::Approx(9.775e-7).epsilon(1e-4));
  CHECK(analytic_density(BpskR{1.023e6}, 1.023e6) < 1e-20);
  CHECK(analytic_density(BocSin{1.023e6, 1.023e6}, 0.0) < 1e-6 * analytic_density(BocSin{1.023e6, 1.023e6}, 0.5e6));
  CHECK_THROWS_AS(analytic_density(Efqpsk{1.023e6}, 0.0), ComputationError);
  CHECK_THROWS_AS(analytic_density(BocSin{1.5e6, 1.023e6}, 0.0), ComputationError);
}

TEST_CASE("analytic PSDs integrate to one over a wide band and are even") {
  // BOC_COS tails decay slowly, so the span is wide.
  const auto grid = symmetric_grid(1e9, 1e3);
  const ModulationKind mods[] = {BpskR{1.023e6},         Qpsk{10.23e6},
                                 BocSin{1.023e6, 1.023e6}, BocSin{10.23e6, 5.115e6},
                                 BocCos{15.345e6, 2.5575e6}, Cboc{6.138e6, 1.023e6, 1.0 / 11.0},
                                 AltBoc{15.345e6, 10.23e6}};
  for (const auto& mod : mods) {
    CAPTURE(modulation_name(mod));
    std::vector<double> d;
    for (double f : grid) d.push_back(analytic_density(mod, f));
    CHECK(integrate(grid, d, {grid.front(), grid.back()}) == doctest::Approx(1.0).epsilon(0.01));
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      peak = std::max(peak, d[i]);
      worst = std::max(worst, std::abs(d[i] - d[d.size() - 1 - i]));
    }
    CHECK(worst <= 1e-12 * peak);

    const SampledPsd p = analytic_psd(mod, symmetric_grid(30e6, 1e3), FrequencyBand::centered(24e6));
    CHECK(integrate(p, p.normalization_band) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("analytic_psd errors") {
  CHECK_THROWS_AS(analytic_psd(Efqpsk{1e6}, symmetric_grid(1e6, 1e3)), ComputationError);
  CHECK_THROWS_AS(analytic_psd(BpskR{1e6}, symmetric_grid(1e6, 1e3), FrequencyBand::centered(4e6)), ConfigError);
}

TEST_CASE("symmetric grid") {
  const auto g = symmetric_grid(10.0, 1.0);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == -10.0);
  CHECK(g.back() == 10.0);
  CHECK(g[10] == 0.0);
}

TEST_CASE("integrate is exact for piecewise-linear densities") {
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const std::vector<double> d{0.0, 2.0, 0.0};
  CHECK(integrate(grid, d, {0.0, 2.0}) == doctest::Approx(2.0));
  CHECK(integrate(grid, d, {0.5, 1.0}) == doctest::Approx(0.75));
  CHECK(integrate(grid, d, {-5.0, 0.5}) == doctest::Approx(0.25));
}

TEST_CASE("occupied bandwidth of a flat spectrum") {
  const SampledPsd p = flat_psd(10e6, 20e6, 1e3);
  CHECK(occupied_bandwidth(p, 0.995) == doctest::Approx(0.995 * 10e6).epsilon(1e-4));
  CHECK(occupied_bandwidth(p, 0.5) == doctest::Approx(5e6).epsilon(1e-4));
  CHECK_THROWS_AS(occupied_bandwidth(p, 0.0), ConfigError);
  CHECK_THROWS_AS(occupied_bandwidth(p, 1.0), ConfigError);
}

TEST_CASE("Welch estimate of random BPSK matches sinc squared") {
  // The reference is sinc squared folded at the sample rate, as any sampled
  // estimate sees it.
  const BasebandBuffer buf = random_bpsk(1'000'000, 8, 5);
  const SampledPsd num = numeric_psd(buf, 4096);
  CHECK(integrate(num, num.normalization_band) == doctest::Approx(1.0).epsilon(1e-6));
  const SampledPsd ref = analytic_psd(BpskR{1.023e6}, num.grid, std::nullopt, buf.sample_rate);
  const double peak = *std::max_element(ref.density.begin(), ref.density.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < num.grid.size(); ++i) {
    if (ref.density[i] < 1e-4 * peak) continue;
    worst = std::max(worst, std::abs(10.0 * std::log10(num.density[i] / ref.density[i])));
  }
  MESSAGE("worst deviation " << worst << " dB");
  CHECK(worst < 0.5);
}

TEST_CASE("Parseval") {
  const BasebandBuffer buf = random_bpsk(20000, 8, 9);
  const Periodogram p = welch_periodogram(buf, 2048);
  const double freq_power = integrate(p.grid, p.density, {p.grid.front(), p.grid.back()}) +
                            p.density.back() * (p.grid[1] - p.grid[0]);
  CHECK(freq_power == doctest::Approx(envelope_stats(buf).mean_power).epsilon(0.01));

  BasebandBuffer scaled = buf;
  for (auto& s : scaled.samples) s *= 3.0f;
  const Periodogram q = welch_periodogram(scaled, 2048);
  CHECK(q.density[1024] == doctest::Approx(9.0 * p.density[1024]).epsilon(1e-5));
}

TEST_CASE("complex tone concentrates in one bin") {
  const double fs = 1.024e6, f0 = 125e3;
  BasebandBuffer buf;
  buf.sample_rate = fs;
  for (int n = 0; n < 65536; ++n) {
    const double ph = 2.0 * kPi * f0 * n / fs;
    buf.samples.emplace_back(static_cast<float>(std::cos(ph)), static_cast<float>(std::sin(ph)));
  }
  const SampledPsd p = numeric_psd(buf, 1024);
  const auto peak = std::max_element(p.density.begin(), p.density.end()) - p.density.begin();
  CHECK(p.grid[static_cast<std::size_t>(peak)] == doctest::Approx(f0));
  // Hann main lobe: the peak and its two neighbours hold essentially all the power.
  const double df = p.spacing();
  CHECK(integrate(p, {f0 - 2 * df, f0 + 2 * df}) > 0.999);
}

TEST_CASE("numeric_psd errors") {
  const BasebandBuffer buf = random_bpsk(100, 8, 1);
  CHECK_THROWS_AS(numeric_psd(buf, 1024), ConfigError);
  CHECK_THROWS_AS(numeric_psd(buf, 8), ConfigError);
}

TEST_CASE("EFQPSK numeric PSD bandwidths") {
  SpectralSettings st;
  st.target_samples = 4'000'000;
  const Catalog cat = builtin_catalog();
  const double x1 = occupied_bandwidth(signal_psd(cat.signal("X1"), SscSource::kAnalytic, st), 0.995);
  CHECK(x1 == doctest::Approx(1.8e6).epsilon(0.10));
}

TEST_CASE("grid refinement leaves SSC stable") {
  const ModulationKind v = BocCos{15.345e6, 2.5575e6};
  const ModulationKind i = BpskR{1.023e6};
  const auto coarse = compute_ssc(analytic_psd(v, symmetric_grid(30e6, 2e3)),
                                  analytic_psd(i, symmetric_grid(30e6, 2e3)), 17.9e6)
                          .value_db_hz;
  const auto fine = compute_ssc(analytic_psd(v, symmetric_grid(30e6, 1e3)),
                                analytic_psd(i, symmetric_grid(30e6, 1e3)), 17.9e6)
                        .value_db_hz;
  CHECK(std::abs(coarse - fine) < 0.05);
}

TEST_CASE("PSD CSV output") {
  SampledPsd p = flat_psd(2.0, 2.0, 1.0);
  std::ostringstream out;
  write_psd_csv(out, p);
  const std::string s = out.str();
  CHECK(s.rfind("offset_hz,density_per_hz\n", 0) == 0);
  CHECK(s.find("0.000,5.000000000e-01") != std::string::npos);
}
