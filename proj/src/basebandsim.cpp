#include "rnsscompat/basebandsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rnsscompat/error.hpp"
#include "rnsscompat/spectrum.hpp"

namespace rnsscompat {

namespace {

constexpr std::uint64_t kChipStream = 0x43484950ull;
constexpr std::uint64_t kNoiseStream = 0x4E4F4953ull;
constexpr std::uint64_t kCodeStream = 0x434F4445ull;

std::uint64_t key_hash(std::string_view id) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canonical_key(id)) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return h;
}

// Samples per chip when sample_rate is an integer multiple of chip_rate, else 0.
int integer_spc(double sample_rate, double chip_rate) {
  const double r = sample_rate / chip_rate;
  const double n = std::round(r);
  return (n >= 1.0 && std::abs(r - n) < 1e-9 * r) ? static_cast<int>(n) : 0;
}

bool interferer_active(const ScenarioConfig& cfg) { return std::isfinite(cfg.interferer_power_dbw); }

// Mean power of the unscaled modulator output over all equally likely chip
// histories that determine one output chip.
double efqpsk_mean_power(const EfqpskOptions& options) {
  constexpr int spc = 64;
  double sum = 0.0;
  std::complex<float> out[spc];
  for (int pattern = 0; pattern < 256; ++pattern) {
    EfqpskStream s(spc, options);
    for (int k = 0; k < 4; ++k) {
      const auto i = static_cast<std::int8_t>((pattern >> (2 * k)) & 1 ? -1 : 1);
      const auto q = static_cast<std::int8_t>((pattern >> (2 * k + 1)) & 1 ? -1 : 1);
      s.push(i, q, out);
    }
    for (const auto& v : out) sum += std::norm(v);
  }
  return sum / (256.0 * spc);
}

}  // namespace

void validate_scenario(const ScenarioConfig& cfg) {
  const auto* bpsk = std::get_if<BpskR>(&cfg.victim.modulation);
  if (!bpsk) throw ConfigError("scenario: victim modulation must be BPSK_R, got " + modulation_name(cfg.victim.modulation));
  if (!(cfg.duration_s >= 0.1)) throw ConfigError("scenario: duration must be >= 0.1 s");
  const double widest = std::max(cfg.victim.receiver_ref_bandwidth_hz,
                                 interferer_active(cfg) ? cfg.interferer.receiver_ref_bandwidth_hz : 0.0);
  if (!(cfg.sample_rate_hz > 2.0 * widest)) {
    throw ConfigError("scenario: sample_rate_hz must exceed twice the widest receiver bandwidth (" +
                      std::to_string(2.0 * widest) + " Hz)");
  }
  if (integer_spc(cfg.sample_rate_hz, bpsk->chip_rate) == 0) {
    throw ConfigError("scenario: sample_rate_hz must be an integer multiple of the victim chip rate");
  }
  if (!std::isfinite(cfg.noise_density_dbw_hz) && !is_absent(cfg.noise_density_dbw_hz)) {
    throw ConfigError("scenario: noise_density_dbw_hz must be finite or absent");
  }
  if (interferer_active(cfg)) {
    const auto* e = std::get_if<Efqpsk>(&cfg.interferer.modulation);
    if (!e) throw ConfigError("scenario: interferer modulation must be EFQPSK");
    if (integer_spc(cfg.sample_rate_hz, e->chip_rate) < 2) {
      throw ConfigError("scenario: sample_rate_hz must be an integer multiple (>= 2) of the interferer chip rate");
    }
    const double offset = std::abs(cfg.interferer.center_frequency_hz - cfg.victim.center_frequency_hz);
    if (!(offset < 0.5 * cfg.sample_rate_hz)) {
      throw ConfigError("scenario: interferer frequency offset exceeds the Nyquist band");
    }
  }
}

Chips victim_code(const SignalSpec& victim, int prn) {
  const auto length = static_cast<std::size_t>(std::llround(chip_rate_of(victim.modulation) * 1e-3));
  if (length == 0) throw ConfigError("victim_code: chip rate below 1 kchip/s");
  return random_chips(length, static_cast<std::uint64_t>(prn), key_hash(victim.id) ^ kCodeStream);
}

ScenarioSynthesizer::ScenarioSynthesizer(const ScenarioConfig& cfg)
    : cfg_(cfg), chip_rng_(cfg.seed, kChipStream), noise_engine_{CounterRng(cfg.seed, kNoiseStream)} {
  validate_scenario(cfg);
  code_ = victim_code(cfg.victim, cfg.victim_prn);
  victim_spc_ = integer_spc(cfg.sample_rate_hz, chip_rate_of(cfg.victim.modulation));
  const double victim_amp = is_absent(cfg.victim_power_dbw) ? 0.0 : std::sqrt(db_to_linear(cfg.victim_power_dbw));
  victim_wave_.resize(code_.size() * static_cast<std::size_t>(victim_spc_));
  for (std::size_t n = 0; n < victim_wave_.size(); ++n) {
    victim_wave_[n] = static_cast<float>(victim_amp * code_[n / static_cast<std::size_t>(victim_spc_)]);
  }
  noise_sigma_ = is_absent(cfg.noise_density_dbw_hz)
                     ? 0.0
                     : std::sqrt(db_to_linear(cfg.noise_density_dbw_hz) * cfg.sample_rate_hz / 2.0);
  if (interferer_active(cfg)) {
    const double rc = chip_rate_of(cfg.interferer.modulation);
    interferer_.emplace(integer_spc(cfg.sample_rate_hz, rc), cfg.efqpsk);
    pending_.resize(static_cast<std::size_t>(interferer_->samples_per_chip()));
    pending_pos_ = pending_.size();
    interferer_amp_ = std::sqrt(db_to_linear(cfg.interferer_power_dbw) / efqpsk_mean_power(cfg.efqpsk));
    const double w = 2.0 * kPi * (cfg.interferer.center_frequency_hz - cfg.victim.center_frequency_hz) /
                     cfg.sample_rate_hz;
    rotator_step_ = {std::cos(w), std::sin(w)};
  }
}

void ScenarioSynthesizer::generate(std::size_t n, std::vector<std::complex<float>>& out) {
  const std::size_t base = out.size();
  out.resize(base + n);
  std::complex<float>* dst = out.data() + base;
  const std::size_t period = victim_wave_.size();
  std::size_t phase = static_cast<std::size_t>(sample_index_ % period);
  for (std::size_t j = 0; j < n; ++j) {
    dst[j] = {victim_wave_[phase], 0.0f};
    if (++phase == period) phase = 0;
  }
  if (interferer_) {
    const double amp = interferer_amp_;
    const double sr = rotator_step_.real(), si = rotator_step_.imag();
    double cr = rotator_.real(), ci = rotator_.imag();
    for (std::size_t j = 0; j < n; ++j) {
      if (pending_pos_ == pending_.size()) {
        const std::uint64_t bits = chip_rng_.next();
        const auto i = static_cast<std::int8_t>(bits & 1 ? -1 : 1);
        const auto q = static_cast<std::int8_t>(bits & 2 ? -1 : 1);
        if (!interferer_->push(i, q, pending_.data())) {
          --j;
          continue;
        }
        pending_pos_ = 0;
      }
      const double xr = pending_[pending_pos_].real(), xi = pending_[pending_pos_].imag();
      ++pending_pos_;
      dst[j] += std::complex<float>(static_cast<float>(amp * (xr * cr - xi * ci)),
                                    static_cast<float>(amp * (xr * ci + xi * cr)));
      const double nr = cr * sr - ci * si;
      ci = cr * si + ci * sr;
      cr = nr;
      if (((sample_index_ + j) & 1023u) == 1023u) {
        const double m = 1.0 / std::sqrt(cr * cr + ci * ci);
        cr *= m;
        ci *= m;
      }
    }
    rotator_ = {cr, ci};
  }
  if (noise_sigma_ > 0.0) {
    const auto sigma = static_cast<float>(noise_sigma_);
    for (std::size_t j = 0; j < n; ++j) {
      const float a = normal_(noise_engine_);
      const float b = normal_(noise_engine_);
      dst[j] += std::complex<float>(sigma * a, sigma * b);
    }
  }
  sample_index_ += n;
}

BasebandBuffer synthesize_scenario(const ScenarioConfig& cfg) {
  ScenarioSynthesizer synth(cfg);
  BasebandBuffer buf;
  buf.sample_rate = cfg.sample_rate_hz;
  const auto total = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate_hz));
  buf.samples.reserve(total);
  const std::size_t block = synth.samples_per_code();
  while (buf.samples.size() < total) synth.generate(std::min(block, total - buf.samples.size()), buf.samples);
  return buf;
}

void NwprEstimator::add(std::complex<double> prompt) {
  block_sum_ += prompt;
  block_wide_ += std::norm(prompt);
  ++epochs_;
  if (++in_block_ == kNwprSubintervals) {
    sum_nbp_ += std::norm(block_sum_);
    sum_wbp_ += block_wide_;
    ++blocks_;
    block_sum_ = {};
    block_wide_ = 0.0;
    in_block_ = 0;
  }
}

Cn0Estimate NwprEstimator::estimate(double coherent_time_s) const {
  Cn0Estimate e;
  e.epochs = epochs_;
  if (blocks_ == 0 || !(sum_wbp_ > 0.0)) return e;
  const double mu = sum_nbp_ / sum_wbp_;
  const double m = kNwprSubintervals;
  if (mu <= 1.0) return e;
  e.cn0_dbhz = mu >= m ? std::numeric_limits<double>::infinity()
                       : linear_to_db((mu - 1.0) / (m - mu) / coherent_time_s);
  e.below_floor = e.cn0_dbhz < kCn0FloorDbHz;
  return e;
}

Cn0Estimate estimate_cn0(const BasebandBuffer& buf, const Replica& replica, double coherent_time_s,
                         std::size_t n_epochs) {
  if (replica.code.empty() || !(replica.chip_rate > 0.0)) throw ConfigError("estimate_cn0: empty replica");
  const double period = static_cast<double>(replica.code.size()) / replica.chip_rate;
  const double periods = coherent_time_s / period;
  if (!(periods >= 1.0 - 1e-9) || std::abs(periods - std::round(periods)) > 1e-6) {
    throw ConfigError("estimate_cn0: coherent_time_s must be a whole number of code periods");
  }
  const double samples_d = coherent_time_s * buf.sample_rate;
  const auto per_epoch = static_cast<std::size_t>(std::llround(samples_d));
  if (std::abs(samples_d - static_cast<double>(per_epoch)) > 1e-6) {
    throw ConfigError("estimate_cn0: coherent interval is not a whole number of samples");
  }
  if (n_epochs == 0 || buf.samples.size() < n_epochs * per_epoch) {
    throw ConfigError("estimate_cn0: buffer shorter than n_epochs coherent intervals");
  }
  std::vector<float> rep(per_epoch);
  const double ratio = replica.chip_rate / buf.sample_rate;
  for (std::size_t n = 0; n < per_epoch; ++n) {
    const auto chip = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
    rep[n] = replica.code[chip % replica.code.size()];
  }
  NwprEstimator est;
  for (std::size_t k = 0; k < n_epochs; ++k) {
    const std::complex<float>* x = buf.samples.data() + k * per_epoch;
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < per_epoch; ++n) {
      re += rep[n] * x[n].real();
      im += rep[n] * x[n].imag();
    }
    est.add({re, im});
  }
  return est.estimate(coherent_time_s);
}

RampProfile RampProfile::standard(double dwell_s) {
  return RampProfile{{{"baseline", kAbsentDb, dwell_s},
                      {"CADL", -10.0, dwell_s},
                      {"IOV", -3.0, dwell_s},
                      {"FOC", 0.0, dwell_s},
                      {"FOC+5", 5.0, dwell_s},
                      {"FOC+10", 10.0, dwell_s},
                      {"FOC+20", 20.0, dwell_s},
                      {"FOC+30", 30.0, dwell_s},
                      {"baseline", kAbsentDb, dwell_s}}};
}

void validate_profile(const RampProfile& profile) {
  if (profile.stages.empty()) throw ConfigError("ramp profile: no stages");
  if (!is_absent(profile.stages.front().interferer_offset_db) || !is_absent(profile.stages.back().interferer_offset_db)) {
    throw ConfigError("ramp profile: first and last stages must be baselines (interferer off)");
  }
  for (const auto& s : profile.stages) {
    if (!(s.dwell_s > 0.0)) throw ConfigError("ramp profile: stage '" + s.label + "' needs dwell_s > 0");
    if (std::isnan(s.interferer_offset_db) || s.interferer_offset_db == std::numeric_limits<double>::infinity()) {
      throw ConfigError("ramp profile: stage '" + s.label + "' has an invalid offset");
    }
  }
}

double foc_power_dbw(const SignalSpec& interferer) {
  return interferer.max_single_sat_rip_dbw + interferer.aggregation_gain_db;
}

double simulator_ssc(const ScenarioConfig& cfg) {
  const double fs = cfg.sample_rate_hz;
  const double rc = chip_rate_of(cfg.interferer.modulation);
  const int spc = integer_spc(fs, rc);
  if (!std::holds_alternative<Efqpsk>(cfg.interferer.modulation) || spc < 2) {
    throw ConfigError("simulator_ssc: interferer must be EFQPSK at >= 2 samples per chip");
  }
  // Same sampling as the synthesizer, which may run below the 8 samples per
  // chip that efqpsk_modulate insists on.
  const std::size_t chips = std::max<std::size_t>(8'000'000 / static_cast<std::size_t>(spc), 1024);
  EfqpskStream stream(spc, cfg.efqpsk);
  CounterRng rng(cfg.seed, kChipStream);
  BasebandBuffer buf;
  buf.sample_rate = fs;
  buf.samples.resize(chips * static_cast<std::size_t>(spc));
  auto* out = buf.samples.data();
  for (std::size_t k = 0; k <= chips; ++k) {
    const std::uint64_t bits = rng.next();
    if (stream.push(bits & 1 ? -1 : 1, bits & 2 ? -1 : 1, out)) out += spc;
  }
  const SampledPsd interferer = numeric_psd(buf, 32768);
  const SampledPsd victim =
      analytic_psd(cfg.victim.modulation, symmetric_grid(fs, 1e3), FrequencyBand::centered(fs), fs);
  return compute_ssc(victim, interferer, cfg.interferer.center_frequency_hz - cfg.victim.center_frequency_hz)
      .value_db_hz;
}

double predicted_cn0(const ScenarioConfig& cfg, double ssc_db_hz) {
  NoiseEnvironment env;
  env.n0_dbw_hz = cfg.noise_density_dbw_hz;
  const double added = i_alt(cfg.interferer_power_dbw, 0.0, 0.0, ssc_db_hz);
  return effective_cn0(cfg.victim_power_dbw, env, added);
}

RampResult run_ramp_profile(const ScenarioConfig& cfg, const RampProfile& profile) {
  validate_profile(profile);
  RampResult result;
  const bool any_interferer = std::any_of(profile.stages.begin(), profile.stages.end(),
                                          [](const RampStage& s) { return std::isfinite(s.interferer_offset_db); });
  if (any_interferer) result.ssc_db_hz = simulator_ssc(cfg);
  const double foc = foc_power_dbw(cfg.interferer);
  double t = 0.0;
  for (std::size_t i = 0; i < profile.stages.size(); ++i) {
    const RampStage& stage = profile.stages[i];
    ScenarioConfig sc = cfg;
    sc.seed = CounterRng::mix(cfg.seed * 0x9E3779B97F4A7C15ull + i);
    sc.duration_s = std::max(stage.dwell_s, 0.1);
    sc.interferer_power_dbw = std::isfinite(stage.interferer_offset_db) ? foc + stage.interferer_offset_db : kAbsentDb;
    ScenarioSynthesizer synth(sc);
    const std::size_t per_epoch = synth.samples_per_code();
    const double coherent = static_cast<double>(per_epoch) / sc.sample_rate_hz;
    const auto epochs = static_cast<std::size_t>(std::floor(stage.dwell_s / coherent + 1e-9));
    std::vector<float> rep(per_epoch);
    const auto spc = per_epoch / synth.code().size();
    for (std::size_t n = 0; n < per_epoch; ++n) rep[n] = synth.code()[n / spc];
    NwprEstimator est;
    std::vector<std::complex<float>> block;
    block.reserve(per_epoch);
    for (std::size_t k = 0; k < epochs; ++k) {
      block.clear();
      synth.generate(per_epoch, block);
      double re = 0.0, im = 0.0;
      for (std::size_t n = 0; n < per_epoch; ++n) {
        re += rep[n] * block[n].real();
        im += rep[n] * block[n].imag();
      }
      est.add({re, im});
    }
    RampPoint p;
    p.label = stage.label;
    p.t_start_s = t;
    p.interferer_power_dbw = sc.interferer_power_dbw;
    p.measured = est.estimate(coherent);
    p.predicted_cn0_dbhz = predicted_cn0(sc, result.ssc_db_hz);
    result.points.push_back(p);
    t += stage.dwell_s;
  }
  const auto& first = result.points.front().measured;
  const auto& last = result.points.back().measured;
  result.hysteresis_db = (std::isfinite(first.cn0_dbhz) && std::isfinite(last.cn0_dbhz))
                             ? last.cn0_dbhz - first.cn0_dbhz
                             : std::numeric_limits<double>::quiet_NaN();
  return result;
}

void write_ramp_csv(std::ostream& out, const RampResult& result) {
  out << "stage,t_start_s,measured_cn0_dbhz,predicted_cn0_dbhz\n";
  char buf[128];
  for (const auto& p : result.points) {
    char measured[32];
    if (p.measured.below_floor) {
      std::snprintf(measured, sizeof(measured), "below_floor");
    } else {
      std::snprintf(measured, sizeof(measured), "%.4f", p.measured.cn0_dbhz);
    }
    std::snprintf(buf, sizeof(buf), "%s,%.3f,%s,%.4f\n", p.label.c_str(), p.t_start_s, measured,
                  p.predicted_cn0_dbhz);
    out << buf;
  }
}

}  // namespace rnsscompat
