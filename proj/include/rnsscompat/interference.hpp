#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rnsscompat/catalog.hpp"
#include "rnsscompat/spectrum.hpp"

namespace rnsscompat {

// Returned instead of -inf when two spectra do not overlap numerically.
inline constexpr double kSscFloorDbHz = -300.0;

struct SscResult {
  double value_db_hz = kSscFloorDbHz;
  std::string victim_id;
  std::string interferer_id;
  double frequency_offset_hz = 0.0;
  FrequencyBand integration_band;
  double grid_spacing_hz = 0.0;
};

// 10 log10 of the integral of G_victim(f) * G_interferer(f - offset) over the
// band (victim-centred offsets). offset is f_interferer - f_victim. Without
// an explicit band the whole overlap of the two grids is used. Throws
// ConfigError when a requested band leaves either grid.
SscResult compute_ssc(const SampledPsd& victim, const SampledPsd& interferer, double freq_offset_hz,
                      std::optional<FrequencyBand> integration_band = std::nullopt);

// Linear sum of the finite components (plus `extra`), in dB(W/Hz).
double total_noise_density(const NoiseEnvironment& env, std::optional<double> extra = std::nullopt);

double i_alt(double rip_dbw, double g_agg_db, double l_proc_db, double ssc_db_hz);

double effective_cn0(double carrier_dbw, const NoiseEnvironment& env,
                     std::optional<double> added_dbw_hz = std::nullopt);

// Non-negative C/N0 loss in dB.
double cn0_degradation(double i_alt_dbw_hz, double pre_noise_total_dbw_hz);

enum class SscSource { kFixed, kAnalytic, kNumeric };

std::string to_string(SscSource source);
// Accepts "fixed", "analytic", "numeric"; ConfigError otherwise.
SscSource parse_ssc_source(std::string_view text);

// Grid and synthesis settings for PSD-based SSCs.
struct SpectralSettings {
  double grid_half_span_hz = kDefaultGridHalfSpan;
  double grid_spacing_hz = kDefaultGridSpacing;
  double sample_rate_hz = 204.6e6;
  std::size_t segment_length = 32768;
  std::size_t target_samples = 8'000'000;
  std::uint64_t seed = 1;
  TransitionShaping efqpsk_shaping = TransitionShaping::kEnhanced;
};

// PSD of a catalog signal. kAnalytic uses the closed form where one exists
// and a synthesized estimate otherwise (EFQPSK); kNumeric synthesizes every
// modulation that has a sampled generator and falls back to the closed form
// for ALTBOC.
SampledPsd signal_psd(const SignalSpec& signal, SscSource source, const SpectralSettings& settings = {});

// SSC of interferer into victim from PSDs built by signal_psd.
SscResult signal_ssc(const SignalSpec& victim, const SignalSpec& interferer, SscSource source,
                     const SpectralSettings& settings = {},
                     std::optional<FrequencyBand> integration_band = std::nullopt);

struct DegradationRow {
  std::string victim_id;
  std::string interferer_id;
  double ssc_db_hz = kSscFloorDbHz;
  double i_alt_dbw_hz = kAbsentDb;
  std::optional<double> pre_noise_total_dbw_hz;
  std::optional<double> delta_cn0_db;
  std::optional<double> effective_cn0_before_dbhz;
  std::optional<double> effective_cn0_after_dbhz;
};

struct DegradationReport {
  SscSource ssc_source = SscSource::kFixed;
  std::vector<DegradationRow> rows;
};

struct ReportOptions {
  SscSource ssc_source = SscSource::kFixed;
  // Required for kFixed.
  std::vector<FixedSscEntry> fixed_table;
  SpectralSettings spectral;
  // Used for victims without a noise environment.
  double default_l_proc_db = 1.0;
};

// Per victim: SSC, I_alt, and (when an environment exists) Δ. Rows are sorted
// by victim id. Throws ConfigError for a victim missing from the fixed table
// in kFixed mode, ComputationError when no PSD can be formed.
DegradationReport build_report(const std::vector<SignalSpec>& victims, const SignalSpec& interferer,
                               const std::map<std::string, NoiseEnvironment>& envs,
                               const ReportOptions& options);

// Columns: victim,interferer,ssc_db_hz,i_alt_dbw_hz,pre_noise_dbw_hz,delta_cn0_db,
// cn0_before_dbhz,cn0_after_dbhz. Unavailable cells are empty.
void write_report_csv(std::ostream& out, const DegradationReport& report);
void write_report_json(std::ostream& out, const DegradationReport& report);

}  // namespace rnsscompat
