// Cross-correlated offset-QPSK waveform family (FQPSK / EFQPSK).
//
// Each rail is built from full-symbol segments spanning the interval
// between two adjacent chip centres. A segment is one of sixteen waveforms
// s0..s15 (s8..s15 are the negatives of s0..s7) chosen from the rail's own
// transition and the other rail's zero crossings at the two segment ends:
//
//   s0  A                               s4  A sin(pi u)
//   s1  A | 1-(1-A)cos^2(pi u)          s5  A sin(pi u) | g+(u)
//   s2  1-(1-A)cos^2(pi u) | A          s6  g-(u) | A sin(pi u)
//   s3  1-(1-A)cos^2(pi u)              s7  sin(pi u)
//
// where "x | y" gives the left (u < 0) and right (u >= 0) halves and
// A = 1/sqrt(2). A rail reaches full amplitude at its chip centre only when
// the other rail is crossing zero there, which keeps the envelope nearly
// constant. The enhanced set uses g+(u) = A sin(pi u) + (1-A) sin^2(pi u)
// and g-(u) = A sin(pi u) - (1-A) sin^2(pi u) so that s5/s6 have a
// continuous slope at the zero crossing; the sinusoidal set uses sin(pi u).
//
// Waveform definitions follow M. K. Simon and T.-Y. Yan, "Unfiltered FQPSK:
// another interpretation and further enhancements", Applied Microwave &
// Wireless, 2000, and the EFQPSK description in D. K. Borah and S. Horan,
// NMSU-ECE-01-014, 2001.

#include <cmath>

#include "rnsscompat/error.hpp"
#include "rnsscompat/waveform.hpp"

namespace rnsscompat {

namespace {

constexpr double kA = kEfqpskCrossAmplitude;

inline std::uint8_t differs(std::int8_t a, std::int8_t b) { return a != b ? 1 : 0; }

}  // namespace

double efqpsk_waveform(int index, double u, TransitionShaping shaping) {
  const bool crossing = (index & 4) != 0;
  const bool full_left = (index & 2) != 0;
  const bool full_right = (index & 1) != 0;
  const bool left = u < 0.0;
  const bool full = left ? full_left : full_right;
  if (!crossing) {
    if (!full) return kA;
    const double c = std::cos(kPi * u);
    return 1.0 - (1.0 - kA) * c * c;
  }
  const double s = std::sin(kPi * u);
  if (!full) return kA * s;
  const bool other_full = left ? full_right : full_left;
  if (shaping == TransitionShaping::kEnhanced && !other_full) {
    return left ? kA * s - (1.0 - kA) * s * s : kA * s + (1.0 - kA) * s * s;
  }
  return s;
}

EfqpskStream::EfqpskStream(int samples_per_chip, const EfqpskOptions& options)
    : spc_(samples_per_chip) {
  if (samples_per_chip < 2) throw ConfigError("EFQPSK: samples_per_chip must be >= 2");
  if (!(options.data_power_fraction > 0.0 && options.data_power_fraction < 1.0)) {
    throw ConfigError("EFQPSK: data_power_fraction must lie in (0, 1)");
  }
  i_scale_ = static_cast<float>(std::sqrt(2.0 * options.data_power_fraction));
  q_scale_ = static_cast<float>(std::sqrt(2.0 * (1.0 - options.data_power_fraction)));
  lut_i_.resize(8 * static_cast<std::size_t>(spc_));
  lut_q_.resize(8 * static_cast<std::size_t>(spc_));
  seg_next_.resize(static_cast<std::size_t>(spc_));
  for (int j = 0; j < spc_; ++j) {
    // Position within the I chip window, 0 at the window start (half a chip
    // before the I chip centre).
    const double pos = (j + 0.5) / spc_;
    const bool next = pos >= 0.5;
    const double u_i = next ? pos - 1.0 : pos;
    const double u_q = pos - 0.5;
    seg_next_[static_cast<std::size_t>(j)] = next ? 1 : 0;
    for (int s = 0; s < 8; ++s) {
      lut_i_[static_cast<std::size_t>(s * spc_ + j)] =
          static_cast<float>(efqpsk_waveform(s, u_i, options.shaping));
      lut_q_[static_cast<std::size_t>(s * spc_ + j)] =
          static_cast<float>(efqpsk_waveform(s, u_q, options.shaping));
    }
  }
}

bool EfqpskStream::push(std::int8_t i_chip, std::int8_t q_chip, std::complex<float>* out) {
  if (pushed_ == 0) {
    for (auto& v : i_) v = i_chip;
    for (auto& v : q_) v = q_chip;
    ++pushed_;
    return false;
  }
  i_[0] = i_[1];
  i_[1] = i_[2];
  i_[2] = i_chip;
  q_[0] = q_[1];
  q_[1] = q_[2];
  q_[2] = q_[3];
  q_[3] = q_chip;
  ++pushed_;
  emit(out);
  return true;
}

void EfqpskStream::emit(std::complex<float>* out) const {
  // I segment toward the current chip (k-1 -> k) and toward the next (k -> k+1).
  const int i_prev = 4 * differs(i_[0], i_[1]) + 2 * differs(q_[0], q_[1]) + differs(q_[1], q_[2]);
  const int i_next = 4 * differs(i_[1], i_[2]) + 2 * differs(q_[1], q_[2]) + differs(q_[2], q_[3]);
  // Q segment k-1 -> k spans the whole I chip window.
  const int q_seg = 4 * differs(q_[1], q_[2]) + 2 * differs(i_[0], i_[1]) + differs(i_[1], i_[2]);
  const float sign_prev = static_cast<float>(i_[1]) * i_scale_;
  const float sign_next = static_cast<float>(i_[2]) * i_scale_;
  const float sign_q = static_cast<float>(q_[2]) * q_scale_;
  const float* lp = &lut_i_[static_cast<std::size_t>(i_prev * spc_)];
  const float* ln = &lut_i_[static_cast<std::size_t>(i_next * spc_)];
  const float* lq = &lut_q_[static_cast<std::size_t>(q_seg * spc_)];
  for (int j = 0; j < spc_; ++j) {
    const float re = seg_next_[static_cast<std::size_t>(j)] ? sign_next * ln[j] : sign_prev * lp[j];
    out[j] = {re, sign_q * lq[j]};
  }
}

BasebandBuffer efqpsk_modulate(const Chips& i_chips, const Chips& q_chips, int samples_per_chip,
                               double chip_rate, const EfqpskOptions& options) {
  if (i_chips.size() != q_chips.size()) {
    throw ConfigError("efqpsk_modulate: I and Q chip streams differ in length (" +
                      std::to_string(i_chips.size()) + " vs " + std::to_string(q_chips.size()) + ")");
  }
  if (i_chips.empty()) throw ConfigError("efqpsk_modulate: empty chip streams");
  if (samples_per_chip < 8) throw ConfigError("efqpsk_modulate: samples_per_chip must be >= 8");
  if (!(chip_rate > 0.0)) throw ConfigError("efqpsk_modulate: chip_rate must be > 0");
  EfqpskStream stream(samples_per_chip, options);
  BasebandBuffer buf;
  buf.sample_rate = chip_rate * samples_per_chip;
  buf.samples.resize(i_chips.size() * static_cast<std::size_t>(samples_per_chip));
  auto* out = buf.samples.data();
  for (std::size_t k = 0; k < i_chips.size(); ++k) {
    if (stream.push(i_chips[k], q_chips[k], out)) out += samples_per_chip;
  }
  stream.push(i_chips.back(), q_chips.back(), out);
  return buf;
}

}  // namespace rnsscompat
