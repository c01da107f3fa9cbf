#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "rnsscompat/catalog.hpp"
#include "rnsscompat/waveform.hpp"

namespace rnsscompat {

struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;

  double width() const { return high_hz - low_hz; }
  static FrequencyBand centered(double width_hz) { return {-0.5 * width_hz, 0.5 * width_hz}; }
  bool operator==(const FrequencyBand&) const = default;
};

// Power spectral density on a uniform grid of offsets from the signal
// centre. density integrates to 1 over normalization_band.
struct SampledPsd {
  std::vector<double> grid;
  std::vector<double> density;
  FrequencyBand normalization_band;

  double spacing() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
  FrequencyBand coverage() const { return {grid.front(), grid.back()}; }
  // Linear interpolation; zero outside the grid.
  double at(double offset_hz) const;
};

// Offsets k * spacing for k = -n..n, n = floor(half_span / spacing).
// Exactly symmetric about zero.
std::vector<double> symmetric_grid(double half_span_hz, double spacing_hz);

inline constexpr double kDefaultGridSpacing = 1e3;
inline constexpr double kDefaultGridHalfSpan = 100e6;

// Closed-form baseband PSD (1/Hz, unit power over the whole real line)
// before any grid normalization. EFQPSK throws ComputationError.
double analytic_density(const ModulationKind& mod, double offset_hz);

// analytic_density sampled on grid and normalized to unit power over
// normalization_band (default: the whole grid). A positive alias_sample_rate
// folds the spectrum as seen by a receiver sampling at that rate.
SampledPsd analytic_psd(const ModulationKind& mod, const std::vector<double>& grid,
                        std::optional<FrequencyBand> normalization_band = std::nullopt,
                        double alias_sample_rate = 0.0);

// Welch estimate in W/Hz, before normalization: Hann-windowed segments,
// 50% overlap, centred grid with spacing sample_rate / segment_length.
struct Periodogram {
  std::vector<double> grid;
  std::vector<double> density;
};
Periodogram welch_periodogram(const BasebandBuffer& buf, std::size_t segment_length);

// Welch estimate normalized to unit power over normalization_band (default:
// the full +/- sample_rate/2 span). Throws ConfigError when the segment is
// longer than the buffer or shorter than 16 samples.
SampledPsd numeric_psd(const BasebandBuffer& buf, std::size_t segment_length,
                       std::optional<FrequencyBand> normalization_band = std::nullopt);

// Integral of the linearly interpolated density over band (clipped to the grid).
double integrate(const std::vector<double>& grid, const std::vector<double>& density,
                 FrequencyBand band);
inline double integrate(const SampledPsd& psd, FrequencyBand band) {
  return integrate(psd.grid, psd.density, band);
}

double power_centroid(const SampledPsd& psd);

// Width of the smallest band symmetric about the power centroid holding at
// least `fraction` of the power on the grid. Throws ConfigError unless
// fraction is in (0, 1).
double occupied_bandwidth(const SampledPsd& psd, double fraction);

// Two-column CSV: offset_hz,density_per_hz.
void write_psd_csv(std::ostream& out, const SampledPsd& psd);

}  // namespace rnsscompat
