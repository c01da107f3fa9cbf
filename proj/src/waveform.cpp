#include "rnsscompat/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"
#include "rnsscompat/error.hpp"
#include "rnsscompat/rng.hpp"

namespace rnsscompat {

namespace {

void check_lfsr(const LfsrGenerator& g) {
  if (g.stages < 2 || g.stages > 32) {
    throw ConfigError("invalid tap specification: stages must be in [2, 32]");
  }
  if (g.taps.empty()) throw ConfigError("invalid tap specification: taps must not be empty");
  for (int t : g.taps) {
    if (t < 1 || t > g.stages) {
      throw ConfigError("invalid tap specification: tap " + std::to_string(t) + " outside [1, " +
                        std::to_string(g.stages) + "]");
    }
  }
  if (std::find(g.taps.begin(), g.taps.end(), g.stages) == g.taps.end()) {
    throw ConfigError("invalid tap specification: taps must include the last stage");
  }
}

std::uint32_t stage_mask(int stages) {
  return stages == 32 ? 0xFFFFFFFFu : ((1u << stages) - 1u);
}

// Output bits of an LFSR, bit i of the state holding stage i+1.
std::vector<std::uint8_t> lfsr_bits(const LfsrGenerator& g, std::size_t n) {
  check_lfsr(g);
  const std::uint32_t mask = stage_mask(g.stages);
  std::uint32_t state = g.initial_state == 0 ? mask : (g.initial_state & mask);
  if (state == 0) throw ConfigError("invalid tap specification: initial state is all zeros");
  std::uint32_t tap_mask = 0;
  for (int t : g.taps) tap_mask |= 1u << (t - 1);
  std::vector<std::uint8_t> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = static_cast<std::uint8_t>((state >> (g.stages - 1)) & 1u);
    const std::uint32_t fb = static_cast<std::uint32_t>(__builtin_parity(state & tap_mask));
    state = ((state << 1) | fb) & mask;
  }
  return out;
}

inline std::int8_t bit_to_chip(std::uint8_t b) { return b ? std::int8_t{-1} : std::int8_t{1}; }

}  // namespace

LfsrGenerator gps_g1() { return LfsrGenerator{10, {3, 10}, 0}; }
LfsrGenerator gps_g2() { return LfsrGenerator{10, {2, 3, 6, 8, 9, 10}, 0}; }

std::size_t lfsr_period(const LfsrGenerator& lfsr) {
  check_lfsr(lfsr);
  if (lfsr.stages > 24) throw ConfigError("lfsr_period: stages > 24 not supported");
  const std::uint32_t mask = stage_mask(lfsr.stages);
  const std::uint32_t start = lfsr.initial_state == 0 ? mask : (lfsr.initial_state & mask);
  std::uint32_t tap_mask = 0;
  for (int t : lfsr.taps) tap_mask |= 1u << (t - 1);
  std::uint32_t state = start;
  for (std::size_t k = 1; k <= (std::size_t{1} << lfsr.stages); ++k) {
    const std::uint32_t fb = static_cast<std::uint32_t>(__builtin_parity(state & tap_mask));
    state = ((state << 1) | fb) & mask;
    if (state == start) return k;
  }
  return 0;
}

Chips gen_prn(const PrnConfig& config, std::size_t n_chips) {
  if (config.length < 1) throw ConfigError("PRN length must be >= 1");
  Chips period(config.length);
  if (const auto* lfsr = std::get_if<LfsrGenerator>(&config.generator)) {
    auto bits = lfsr_bits(*lfsr, config.length);
    for (std::size_t k = 0; k < config.length; ++k) period[k] = bit_to_chip(bits[k]);
  } else if (const auto* gold = std::get_if<GoldGenerator>(&config.generator)) {
    auto a = lfsr_bits(gold->first, config.length);
    // Delay the second sequence by generating extra bits and skipping ahead.
    const std::size_t p2 = gold->second.stages <= 24 ? lfsr_period(gold->second) : 0;
    const std::size_t skip = p2 ? gold->second_delay % p2 : gold->second_delay;
    auto b = lfsr_bits(gold->second, config.length + skip);
    for (std::size_t k = 0; k < config.length; ++k) period[k] = bit_to_chip(a[k] ^ b[k + skip]);
  } else {
    const auto& table = std::get<ChipTable>(config.generator).chips;
    if (table.size() != config.length) {
      throw ConfigError("explicit chip table length differs from PRN length");
    }
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (table[k] != 1 && table[k] != -1) throw ConfigError("chip table entries must be +1 or -1");
    }
    period = table;
  }
  Chips out(n_chips);
  for (std::size_t k = 0; k < n_chips; ++k) out[k] = period[k % config.length];
  return out;
}

Chips apply_overlay(const Chips& chips, const Chips& overlay, std::size_t code_length) {
  if (overlay.empty()) return chips;
  if (code_length == 0) throw ConfigError("overlay: code length must be >= 1");
  Chips out(chips.size());
  for (std::size_t k = 0; k < chips.size(); ++k) {
    out[k] = static_cast<std::int8_t>(chips[k] * overlay[(k / code_length) % overlay.size()]);
  }
  return out;
}

BasebandBuffer bpsk_modulate(const Chips& chips, int samples_per_chip, double chip_rate) {
  if (samples_per_chip < 1) throw ConfigError("bpsk_modulate: samples_per_chip must be >= 1");
  if (!(chip_rate > 0.0)) throw ConfigError("bpsk_modulate: chip_rate must be > 0");
  BasebandBuffer buf;
  buf.sample_rate = chip_rate * samples_per_chip;
  buf.samples.reserve(chips.size() * static_cast<std::size_t>(samples_per_chip));
  for (auto c : chips) {
    buf.samples.insert(buf.samples.end(), static_cast<std::size_t>(samples_per_chip),
                       std::complex<float>(static_cast<float>(c), 0.0f));
  }
  return buf;
}

DataPilotChips compose_data_pilot(const Chips& data_bits, std::size_t chips_per_bit,
                                  const PrnConfig& data_prn, const PrnConfig& pilot_prn,
                                  const Chips& overlay) {
  if (chips_per_bit == 0 || data_prn.length == 0 || chips_per_bit % data_prn.length != 0) {
    throw ConfigError("compose_data_pilot: non-commensurate rates (chips_per_bit " +
                      std::to_string(chips_per_bit) + " is not a multiple of the data code length " +
                      std::to_string(data_prn.length) + ")");
  }
  const std::size_t n = data_bits.size() * chips_per_bit;
  DataPilotChips out;
  out.i_chips = gen_prn(data_prn, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.i_chips[k] = static_cast<std::int8_t>(out.i_chips[k] * data_bits[k / chips_per_bit]);
  }
  const Chips& ov = overlay.empty() ? pilot_prn.overlay : overlay;
  out.q_chips = apply_overlay(gen_prn(pilot_prn, n), ov, pilot_prn.length);
  return out;
}

EnvelopeStats envelope_stats(const BasebandBuffer& buf) {
  if (buf.samples.empty()) throw ConfigError("envelope_stats: empty buffer");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double power = 0.0;
  for (const auto& s : buf.samples) {
    const double p = static_cast<double>(s.real()) * s.real() + static_cast<double>(s.imag()) * s.imag();
    lo = std::min(lo, p);
    hi = std::max(hi, p);
    power += p;
  }
  EnvelopeStats st;
  st.mean_power = power / static_cast<double>(buf.samples.size());
  st.ripple_db = lo == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(hi / lo);
  return st;
}

BasebandBuffer modulate_chips(const ModulationKind& mod, const Chips& i_chips, const Chips& q_chips,
                              double sample_rate) {
  if (std::holds_alternative<AltBoc>(mod) || std::holds_alternative<Efqpsk>(mod)) {
    throw ComputationError("modulate_chips: no sampled generator for " + modulation_name(mod));
  }
  if (!(sample_rate > 0.0)) throw ConfigError("modulate_chips: sample_rate must be > 0");
  const double rc = chip_rate_of(mod);
  const bool two_rails = std::holds_alternative<Qpsk>(mod) || std::holds_alternative<Cboc>(mod);
  if (two_rails && q_chips.size() != i_chips.size()) {
    throw ConfigError("modulate_chips: I and Q chip streams differ in length");
  }
  const auto n = static_cast<std::size_t>(std::floor(static_cast<double>(i_chips.size()) / rc * sample_rate));
  BasebandBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(n);
  auto square = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
  for (std::size_t j = 0; j < n; ++j) {
    const double t = (static_cast<double>(j) + 0.5) / sample_rate;
    const auto k = std::min(static_cast<std::size_t>(t * rc), i_chips.size() - 1);
    const double ci = i_chips[k];
    double re = 0.0;
    double im = 0.0;
    if (const auto* m = std::get_if<BocSin>(&mod)) {
      re = ci * square(std::sin(2.0 * kPi * m->subcarrier_rate * t));
    } else if (const auto* m = std::get_if<BocCos>(&mod)) {
      re = ci * square(std::cos(2.0 * kPi * m->subcarrier_rate * t));
    } else if (const auto* m = std::get_if<Cboc>(&mod)) {
      // CBOC(+) on one rail and CBOC(-) on the other, as for a data/pilot pair.
      const double lo = std::sqrt(1.0 - m->power_split) * square(std::sin(2.0 * kPi * m->low_rate * t));
      const double hi = std::sqrt(m->power_split) * square(std::sin(2.0 * kPi * m->high_rate * t));
      re = ci * (lo + hi) / std::sqrt(2.0);
      im = q_chips[k] * (lo - hi) / std::sqrt(2.0);
    } else if (std::holds_alternative<Qpsk>(mod)) {
      re = ci / std::sqrt(2.0);
      im = q_chips[k] / std::sqrt(2.0);
    } else {
      re = ci;
    }
    buf.samples[j] = {static_cast<float>(re), static_cast<float>(im)};
  }
  return buf;
}

void export_iq_cf32(const std::filesystem::path& path, const BasebandBuffer& buf) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    for (const auto& s : buf.samples) {
      const float iq[2] = {s.real(), s.imag()};
      out.write(reinterpret_cast<const char*>(iq), sizeof(iq));
    }
  }
  nlohmann::json side = {{"format", "cf32_le"},
                         {"sample_rate_hz", buf.sample_rate},
                         {"epoch_s", buf.epoch},
                         {"n_samples", buf.samples.size()}};
  std::ofstream meta(path.string() + ".json");
  if (!meta) throw ConfigError("cannot write '" + path.string() + ".json'");
  meta << side.dump(2) << "\n";
}

Chips random_chips(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  Chips out(n);
  for (auto& c : out) c = rng.coin() ? std::int8_t{1} : std::int8_t{-1};
  return out;
}

PrnConfig placeholder_prn(std::string_view signal_id, int prn, bool pilot) {
  if (prn < 1) throw ConfigError("placeholder_prn: prn must be >= 1");
  const std::string key = canonical_key(signal_id);
  PrnConfig cfg;
  if (key == "X5") {
    // x^14 + x^5 + x^3 + x + 1, distinct start states per PRN and rail.
    cfg.length = 10230;
    const auto state = static_cast<std::uint32_t>(1 + 2 * prn + (pilot ? 1 : 0)) * 2654435761u % 16383u + 1u;
    cfg.generator = LfsrGenerator{14, {1, 3, 5, 14}, state};
    return cfg;
  }
  cfg.length = 1023;
  const std::size_t delay = static_cast<std::size_t>(5 * prn + (pilot ? 500 : 0)) % 1023;
  cfg.generator = GoldGenerator{gps_g1(), gps_g2(), delay};
  return cfg;
}

}  // namespace rnsscompat
