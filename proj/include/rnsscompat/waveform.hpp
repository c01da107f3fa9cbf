#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "rnsscompat/catalog.hpp"

namespace rnsscompat {

// Chip values are +1 / -1 throughout.
using Chips = std::vector<std::int8_t>;

// Fibonacci LFSR. Stage `stages` is the output; the feedback is the XOR of
// the listed tap stages (1-based, must include `stages`). initial_state holds
// stage i in bit i-1; zero selects the all-ones state. Output bit 0 maps to
// chip +1, bit 1 to chip -1.
struct LfsrGenerator {
  int stages = 10;
  std::vector<int> taps;
  std::uint32_t initial_state = 0;
};

// Chipwise product of two LFSR outputs, the second delayed by second_delay chips.
struct GoldGenerator {
  LfsrGenerator first;
  LfsrGenerator second;
  std::size_t second_delay = 0;
};

struct ChipTable {
  Chips chips;
};

using PrnGenerator = std::variant<LfsrGenerator, GoldGenerator, ChipTable>;

struct PrnConfig {
  std::size_t length = 1023;
  PrnGenerator generator;
  // Optional overlay (secondary) code, one value per primary code epoch.
  Chips overlay;
};

struct BasebandBuffer {
  std::vector<std::complex<float>> samples;
  double sample_rate = 0.0;
  double epoch = 0.0;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

// Chips 0..n_chips-1 of the primary code, periodic with config.length.
// Throws ConfigError for an invalid tap specification or empty table.
Chips gen_prn(const PrnConfig& config, std::size_t n_chips);

// Period of the raw LFSR output sequence (brute force, stages <= 24).
std::size_t lfsr_period(const LfsrGenerator& lfsr);

// chips[k] *= overlay[(k / code_length) % overlay.size()].
Chips apply_overlay(const Chips& chips, const Chips& overlay, std::size_t code_length);

// Rectangular chips on I, Q = 0. Throws ConfigError if samples_per_chip < 1.
BasebandBuffer bpsk_modulate(const Chips& chips, int samples_per_chip, double chip_rate);

struct DataPilotChips {
  Chips i_chips;
  Chips q_chips;
};

// Data rail: each bit is held for chips_per_bit chips and multiplied onto the
// data PRN. Pilot rail: pilot PRN times the overlay (one overlay value per
// pilot code epoch); an empty overlay falls back to pilot_prn.overlay, then
// to all-ones. chips_per_bit must be a positive multiple of the data code
// length, otherwise ConfigError.
DataPilotChips compose_data_pilot(const Chips& data_bits, std::size_t chips_per_bit,
                                  const PrnConfig& data_prn, const PrnConfig& pilot_prn,
                                  const Chips& overlay = {});

// Transition shaping of the cross-correlated waveform family.
//  kEnhanced:   slope-continuous zero crossings (the EFQPSK waveform set).
//  kSinusoidal: plain sinusoidal zero crossings (the unenhanced FQPSK/XPSK set).
enum class TransitionShaping { kEnhanced, kSinusoidal };

struct EfqpskOptions {
  TransitionShaping shaping = TransitionShaping::kEnhanced;
  // Fraction of total power on the I (data) rail.
  double data_power_fraction = 0.5;
};

// Cross-correlation amplitude A of the waveform family.
inline constexpr double kEfqpskCrossAmplitude = 0.70710678118654752440;

// One of the eight positive full-symbol waveforms s0..s7 evaluated at
// u in [-1/2, 1/2] symbol periods from the segment midpoint. Bit 2 of
// `index` selects a zero-crossing segment, bit 1 full amplitude at the left
// end, bit 0 full amplitude at the right end.
double efqpsk_waveform(int index, double u, TransitionShaping shaping);

// Offset-rail cross-correlated constant-envelope modulation of two chip
// streams. The Q rail lags I by half a chip; chip k of I occupies output
// samples [k*spc, (k+1)*spc). Streams are extended by holding their edge
// chips. Unit mean power for balanced, random streams.
// Throws ConfigError on length mismatch, empty input or samples_per_chip < 8.
BasebandBuffer efqpsk_modulate(const Chips& i_chips, const Chips& q_chips, int samples_per_chip,
                               double chip_rate, const EfqpskOptions& options = {});

// Incremental form of efqpsk_modulate for long streams: feed chips in order
// and read the samples of chip k once chip k+1 is known.
class EfqpskStream {
 public:
  EfqpskStream(int samples_per_chip, const EfqpskOptions& options = {});

  int samples_per_chip() const { return spc_; }

  // Pushes the next chip pair. Returns false until enough context exists to
  // emit a chip; when it returns true, `out` holds samples_per_chip samples
  // for the chip pushed one call earlier.
  bool push(std::int8_t i_chip, std::int8_t q_chip, std::complex<float>* out);

 private:
  void emit(std::complex<float>* out) const;

  int spc_;
  float i_scale_;
  float q_scale_;
  // lut_i_[s * spc + j]: waveform s for I at sample j; seg_next_[j] tells
  // whether sample j uses the segment toward the next chip.
  std::vector<float> lut_i_;
  std::vector<float> lut_q_;
  std::vector<std::uint8_t> seg_next_;
  // History: i_[0..2] = I_{k-1}, I_k, I_{k+1}; q_[0..3] = Q_{k-2} .. Q_{k+1}.
  std::int8_t i_[3] = {1, 1, 1};
  std::int8_t q_[4] = {1, 1, 1, 1};
  std::size_t pushed_ = 0;
};

struct EnvelopeStats {
  // 20 log10(max|s| / min|s|); +infinity if any sample is exactly zero.
  double ripple_db = 0.0;
  double mean_power = 0.0;
};

// Throws ConfigError on an empty buffer.
EnvelopeStats envelope_stats(const BasebandBuffer& buf);

// Time-domain synthesis of classical modulations for spectral estimation.
// Supports BPSK_R, QPSK (i and q rails), BOC_SIN, BOC_COS, CBOC (i rail).
// Chip index and subcarrier phase are evaluated at each sample instant, so
// sample_rate need not be a multiple of the chip rate. ALTBOC and EFQPSK
// throw ComputationError (use efqpsk_modulate for the latter).
BasebandBuffer modulate_chips(const ModulationKind& mod, const Chips& i_chips, const Chips& q_chips,
                              double sample_rate);

// Interleaved little-endian float32 I/Q plus a JSON sidecar at
// <path>.json holding sample_rate_hz, epoch_s and sample count.
void export_iq_cf32(const std::filesystem::path& path, const BasebandBuffer& buf);

// Uniform random chips from the counter generator.
Chips random_chips(std::size_t n, std::uint64_t seed, std::uint64_t stream);

// Placeholder spreading codes for the Pulsar signals (the real codes are
// not public): Gold codes of length 1023 for X1, truncated 14-stage
// m-sequences of length 10230 for X5.
PrnConfig placeholder_prn(std::string_view signal_id, int prn, bool pilot);

// GPS C/A code generator pair (G1 = 1 + x^3 + x^10, G2 = 1 + x^2 + x^3 + x^6 + x^8 + x^9 + x^10).
LfsrGenerator gps_g1();
LfsrGenerator gps_g2();

}  // namespace rnsscompat
