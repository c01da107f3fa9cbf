#include "rnsscompat/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>

#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace {

double sinc_sq(double x) {
  if (std::abs(x) < 1e-8) return 1.0;
  const double s = std::sin(x) / x;
  return s * s;
}

int subcarrier_ratio(double subcarrier_rate, double chip_rate) {
  const double k = 2.0 * subcarrier_rate / chip_rate;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-6 || r < 1.0) {
    throw ComputationError("BOC spectrum requires 2 * subcarrier_rate / chip_rate to be a positive integer");
  }
  return static_cast<int>(r);
}

// The BOC-family expressions below are 0/0 at isolated frequencies; there
// the value is replaced by the average of two nearby evaluations.
template <class F>
double regularized(F raw, double f, double step) {
  const double v = raw(f);
  if (std::isfinite(v)) return v;
  return 0.5 * (raw(f - step) + raw(f + step));
}

double boc_sin(double fsc, double fc, double f) {
  const int k = subcarrier_ratio(fsc, fc);
  auto raw = [&](double x) {
    const double c = std::cos(kPi * x / (2.0 * fsc));
    if (x == 0.0 || std::abs(c) < 1e-7) return std::numeric_limits<double>::quiet_NaN();
    const double code = (k % 2 == 0) ? std::sin(kPi * x / fc) : std::cos(kPi * x / fc);
    const double v = std::sin(kPi * x / (2.0 * fsc)) * code / (kPi * x * c);
    return fc * v * v;
  };
  return regularized(raw, f, 1e-4 * fc);
}

double boc_cos(double fsc, double fc, double f) {
  const int k = subcarrier_ratio(fsc, fc);
  auto raw = [&](double x) {
    const double c = std::cos(kPi * x / (2.0 * fsc));
    if (x == 0.0 || std::abs(c) < 1e-7) return std::numeric_limits<double>::quiet_NaN();
    const double code = (k % 2 == 0) ? std::sin(kPi * x / fc) : std::cos(kPi * x / fc);
    const double s4 = std::sin(kPi * x / (4.0 * fsc));
    const double v = 2.0 * s4 * s4 * code / (kPi * x * c);
    return fc * v * v;
  };
  return regularized(raw, f, 1e-4 * fc);
}

// Constant-envelope AltBOC, odd 2 fsc / fc, scaled to unit total power.
double alt_boc(double fsc, double fc, double f) {
  const int k = subcarrier_ratio(fsc, fc);
  if (k % 2 == 0) throw ComputationError("ALTBOC spectrum implemented for odd 2*fsc/fc only");
  auto raw = [&](double x) {
    const double c2 = std::cos(kPi * x / (2.0 * fsc));
    if (x == 0.0 || std::abs(c2) < 1e-7) return std::numeric_limits<double>::quiet_NaN();
    const double c4 = std::cos(kPi * x / (4.0 * fsc));
    const double code = std::cos(kPi * x / fc);
    const double bracket = c2 * c2 - c2 - 2.0 * c2 * c4 + 2.0;
    return 0.5 * fc / (kPi * kPi * x * x) * code * code / (c2 * c2) * bracket;
  };
  return regularized(raw, f, 1e-4 * fc);
}

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double SampledPsd::at(double offset_hz) const {
  if (grid.empty() || offset_hz < grid.front() || offset_hz > grid.back()) return 0.0;
  const double pos = (offset_hz - grid.front()) / spacing();
  auto i = static_cast<std::size_t>(pos);
  if (i >= grid.size() - 1) return density.back();
  const double w = pos - static_cast<double>(i);
  return density[i] + w * (density[i + 1] - density[i]);
}

std::vector<double> symmetric_grid(double half_span_hz, double spacing_hz) {
  if (!(spacing_hz > 0.0) || !(half_span_hz > 0.0)) {
    throw ConfigError("frequency grid: span and spacing must be > 0");
  }
  const auto n = static_cast<long long>(std::floor(half_span_hz / spacing_hz + 1e-9));
  if (n < 1) throw ConfigError("frequency grid: spacing wider than half span");
  std::vector<double> g(static_cast<std::size_t>(2 * n + 1));
  for (long long k = -n; k <= n; ++k) g[static_cast<std::size_t>(k + n)] = static_cast<double>(k) * spacing_hz;
  return g;
}

double analytic_density(const ModulationKind& mod, double f) {
  if (const auto* m = std::get_if<BpskR>(&mod)) return sinc_sq(kPi * f / m->chip_rate) / m->chip_rate;
  if (const auto* m = std::get_if<Qpsk>(&mod)) return sinc_sq(kPi * f / m->chip_rate) / m->chip_rate;
  if (const auto* m = std::get_if<BocSin>(&mod)) return boc_sin(m->subcarrier_rate, m->chip_rate, f);
  if (const auto* m = std::get_if<BocCos>(&mod)) return boc_cos(m->subcarrier_rate, m->chip_rate, f);
  if (const auto* m = std::get_if<AltBoc>(&mod)) return alt_boc(m->subcarrier_rate, m->chip_rate, f);
  if (const auto* m = std::get_if<Cboc>(&mod)) {
    return (1.0 - m->power_split) * boc_sin(m->low_rate, m->low_rate, f) +
           m->power_split * boc_sin(m->high_rate, m->low_rate, f);
  }
  throw ComputationError("unsupported modulation for analytic PSD: " + modulation_name(mod) +
                         " (use the numeric estimate)");
}

double integrate(const std::vector<double>& grid, const std::vector<double>& density,
                 FrequencyBand band) {
  if (grid.size() < 2) return 0.0;
  const double lo = std::max(band.low_hz, grid.front());
  const double hi = std::min(band.high_hz, grid.back());
  if (!(hi > lo)) return 0.0;
  const double df = grid[1] - grid[0];
  auto value = [&](double f) {
    const double pos = (f - grid.front()) / df;
    auto i = std::min(static_cast<std::size_t>(pos), grid.size() - 2);
    const double w = pos - static_cast<double>(i);
    return density[i] + w * (density[i + 1] - density[i]);
  };
  const auto first = static_cast<std::size_t>(std::ceil((lo - grid.front()) / df - 1e-9));
  const auto last = static_cast<std::size_t>(std::floor((hi - grid.front()) / df + 1e-9));
  double sum = 0.0;
  double prev_f = lo;
  double prev_v = value(lo);
  for (std::size_t i = first; i <= last && i < grid.size(); ++i) {
    if (grid[i] <= prev_f) continue;
    if (grid[i] >= hi) break;
    sum += 0.5 * (prev_v + density[i]) * (grid[i] - prev_f);
    prev_f = grid[i];
    prev_v = density[i];
  }
  sum += 0.5 * (prev_v + value(hi)) * (hi - prev_f);
  return sum;
}

SampledPsd analytic_psd(const ModulationKind& mod, const std::vector<double>& grid,
                        std::optional<FrequencyBand> normalization_band, double alias_sample_rate) {
  if (grid.size() < 2) throw ConfigError("analytic_psd: grid needs at least two points");
  SampledPsd psd;
  psd.grid = grid;
  psd.density.resize(grid.size());
  const int folds = alias_sample_rate > 0.0 ? 200 : 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = 0.0;
    for (int m = -folds; m <= folds; ++m) v += analytic_density(mod, grid[i] + m * alias_sample_rate);
    psd.density[i] = v;
  }
  psd.normalization_band = normalization_band.value_or(psd.coverage());
  const FrequencyBand cov = psd.coverage();
  if (psd.normalization_band.low_hz < cov.low_hz - 1e-9 || psd.normalization_band.high_hz > cov.high_hz + 1e-9) {
    throw ConfigError("analytic_psd: grid does not cover the normalization band");
  }
  const double total = integrate(psd, psd.normalization_band);
  if (!(total > 0.0)) throw ComputationError("analytic_psd: no power in normalization band");
  for (auto& d : psd.density) d /= total;
  return psd;
}

Periodogram welch_periodogram(const BasebandBuffer& buf, std::size_t segment_length) {
  if (segment_length < 16) throw ConfigError("numeric_psd: segment_length must be >= 16");
  if (segment_length > buf.samples.size()) {
    throw ConfigError("numeric_psd: segment longer than buffer (" + std::to_string(segment_length) +
                      " > " + std::to_string(buf.samples.size()) + ")");
  }
  if (!(buf.sample_rate > 0.0)) throw ConfigError("numeric_psd: sample_rate must be > 0");
  const std::size_t L = segment_length;
  std::vector<double> window(L);
  double wsum = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) / static_cast<double>(L));
    wsum += window[n] * window[n];
  }
  struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  std::unique_ptr<fftw_complex, FftwFree> in(fftw_alloc_complex(L));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(L));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(L), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  std::vector<double> acc(L, 0.0);
  const std::size_t hop = L / 2;
  std::size_t segments = 0;
  for (std::size_t start = 0; start + L <= buf.samples.size(); start += hop) {
    for (std::size_t n = 0; n < L; ++n) {
      in.get()[n][0] = window[n] * buf.samples[start + n].real();
      in.get()[n][1] = window[n] * buf.samples[start + n].imag();
    }
    fftw_execute(plan);
    for (std::size_t k = 0; k < L; ++k) {
      acc[k] += out.get()[k][0] * out.get()[k][0] + out.get()[k][1] * out.get()[k][1];
    }
    ++segments;
  }
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
  Periodogram p;
  p.grid.resize(L);
  p.density.resize(L);
  const double fs = buf.sample_rate;
  const double scale = 1.0 / (static_cast<double>(segments) * fs * wsum);
  // fftshift: bin k holds frequency (k - L/2) * fs / L after the shift.
  const std::size_t half = L / 2;
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t src = (k + (L - half)) % L;
    p.grid[k] = (static_cast<double>(k) - static_cast<double>(half)) * fs / static_cast<double>(L);
    p.density[k] = acc[src] * scale;
  }
  return p;
}

SampledPsd numeric_psd(const BasebandBuffer& buf, std::size_t segment_length,
                       std::optional<FrequencyBand> normalization_band) {
  Periodogram p = welch_periodogram(buf, segment_length);
  SampledPsd psd;
  psd.grid = std::move(p.grid);
  psd.density = std::move(p.density);
  psd.normalization_band = normalization_band.value_or(psd.coverage());
  const double total = integrate(psd, psd.normalization_band);
  if (!(total > 0.0)) throw ComputationError("numeric_psd: no power in normalization band");
  for (auto& d : psd.density) d /= total;
  return psd;
}

double power_centroid(const SampledPsd& psd) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i + 1 < psd.grid.size(); ++i) {
    const double df = psd.grid[i + 1] - psd.grid[i];
    num += 0.5 * (psd.grid[i] * psd.density[i] + psd.grid[i + 1] * psd.density[i + 1]) * df;
    den += 0.5 * (psd.density[i] + psd.density[i + 1]) * df;
  }
  return den > 0.0 ? num / den : 0.0;
}

double occupied_bandwidth(const SampledPsd& psd, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("occupied_bandwidth: fraction must lie in (0, 1)");
  }
  if (psd.grid.size() < 2) throw ConfigError("occupied_bandwidth: grid needs at least two points");
  const FrequencyBand cov = psd.coverage();
  const double total = integrate(psd, cov);
  if (!(total > 0.0)) throw ComputationError("occupied_bandwidth: PSD carries no power");
  const double centre = power_centroid(psd);
  const double target = fraction * total;
  double lo = 0.0;
  double hi = std::max(centre - cov.low_hz, cov.high_hz - centre);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (integrate(psd, {centre - mid, centre + mid}) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 2.0 * hi;
}

void write_psd_csv(std::ostream& out, const SampledPsd& psd) {
  out << "offset_hz,density_per_hz\n";
  char line[96];
  for (std::size_t i = 0; i < psd.grid.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.3f,%.9e\n", psd.grid[i], psd.density[i]);
    out << line;
  }
}

}  // namespace rnsscompat
