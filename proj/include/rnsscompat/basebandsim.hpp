#pragma once

#include <complex>
#include <limits>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "rnsscompat/catalog.hpp"
#include "rnsscompat/interference.hpp"
#include "rnsscompat/rng.hpp"
#include "rnsscompat/waveform.hpp"

namespace rnsscompat {

inline constexpr double kDefaultNoiseDensityDbwHz = -200.3;
inline constexpr double kCn0FloorDbHz = 20.0;

struct ScenarioConfig {
  SignalSpec victim;
  int victim_prn = 1;
  SignalSpec interferer;
  double victim_power_dbw = -158.5;
  double interferer_power_dbw = kAbsentDb;
  double noise_density_dbw_hz = kDefaultNoiseDensityDbwHz;
  double sample_rate_hz = 61.38e6;
  double duration_s = 0.1;
  std::uint64_t seed = 1;
  EfqpskOptions efqpsk;
};

// Throws ConfigError: victim not BPSK_R, interferer not EFQPSK, sample rate
// not above twice the wider receiver bandwidth or not an integer multiple of
// both chip rates, duration < 100 ms.
void validate_scenario(const ScenarioConfig& cfg);

// Victim spreading code: one code period of 1 ms worth of chips, fixed by
// (signal id, prn). The real codes are not needed for C/N0 physics.
Chips victim_code(const SignalSpec& victim, int prn);

// Uniform bit source over a CounterRng for the Boost distributions.
struct CounterEngine {
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return rng.next(); }
  CounterRng rng;
};

// Sample-by-sample generator of victim + interferer + noise. Components are
// drawn from independent counter streams keyed by the seed, so a stream can
// be regenerated exactly. Noise samples come from the ziggurat normal
// transform of Boost.Random, whose output depends only on the bit source.
class ScenarioSynthesizer {
 public:
  explicit ScenarioSynthesizer(const ScenarioConfig& cfg);

  // Appends the next n samples to out.
  void generate(std::size_t n, std::vector<std::complex<float>>& out);

  const Chips& code() const { return code_; }
  std::size_t samples_per_code() const { return code_.size() * static_cast<std::size_t>(victim_spc_); }

 private:
  ScenarioConfig cfg_;
  Chips code_;
  int victim_spc_ = 1;
  std::vector<float> victim_wave_;
  double interferer_amp_ = 0.0;
  double noise_sigma_ = 0.0;
  std::optional<EfqpskStream> interferer_;
  CounterRng chip_rng_;
  CounterEngine noise_engine_;
  boost::random::normal_distribution<float> normal_;
  std::vector<std::complex<float>> pending_;
  std::size_t pending_pos_ = 0;
  std::complex<double> rotator_{1.0, 0.0};
  std::complex<double> rotator_step_{1.0, 0.0};
  std::uint64_t sample_index_ = 0;
};

BasebandBuffer synthesize_scenario(const ScenarioConfig& cfg);

// Rectangular-chip BPSK replica.
struct Replica {
  Chips code;
  double chip_rate = 0.0;
};

struct Cn0Estimate {
  double cn0_dbhz = kAbsentDb;
  bool below_floor = true;
  std::size_t epochs = 0;
};

// Narrowband/wideband power-ratio estimator with code phase and carrier
// known. Each narrowband sum spans kNwprSubintervals coherent intervals.
inline constexpr int kNwprSubintervals = 20;

class NwprEstimator {
 public:
  // One coherent correlator output per call.
  void add(std::complex<double> prompt);
  Cn0Estimate estimate(double coherent_time_s) const;

 private:
  std::complex<double> block_sum_{};
  double block_wide_ = 0.0;
  int in_block_ = 0;
  double sum_nbp_ = 0.0;
  double sum_wbp_ = 0.0;
  std::size_t blocks_ = 0;
  std::size_t epochs_ = 0;
};

// Throws ConfigError if coherent_time is not a whole number of code periods
// or the buffer holds fewer than n_epochs coherent intervals.
Cn0Estimate estimate_cn0(const BasebandBuffer& buf, const Replica& replica, double coherent_time_s,
                         std::size_t n_epochs);

struct RampStage {
  std::string label;
  // Interferer power relative to FOC; kAbsentDb switches it off.
  double interferer_offset_db = kAbsentDb;
  double dwell_s = 2.0;
};

struct RampProfile {
  std::vector<RampStage> stages;

  // baseline, CADL (FOC-10), IOV (FOC-3), FOC, +5, +10, +20, +30, baseline.
  // The CADL and IOV levels are placeholders.
  static RampProfile standard(double dwell_s = 2.0);
};

// Throws ConfigError unless the profile is nonempty and starts and ends with
// a baseline stage.
void validate_profile(const RampProfile& profile);

// Aggregate interferer power at full deployment: max single-satellite RIP
// plus aggregation gain.
double foc_power_dbw(const SignalSpec& interferer);

// SSC of the interferer into the victim's correlator at the scenario's
// sample rate (victim spectrum folded at that rate).
double simulator_ssc(const ScenarioConfig& cfg);

// Effective C/N0 with L_proc = 0 and the given SSC.
double predicted_cn0(const ScenarioConfig& cfg, double ssc_db_hz);

struct RampPoint {
  std::string label;
  double t_start_s = 0.0;
  double interferer_power_dbw = kAbsentDb;
  Cn0Estimate measured;
  double predicted_cn0_dbhz = 0.0;
};

struct RampResult {
  std::vector<RampPoint> points;
  double ssc_db_hz = kSscFloorDbHz;
  double hysteresis_db = 0.0;
};

// Runs each stage as a fresh scenario (seed mixed with the stage index) with
// interferer power foc_power_dbw(cfg.interferer) + offset.
RampResult run_ramp_profile(const ScenarioConfig& cfg, const RampProfile& profile);

// stage,t_start_s,measured_cn0_dbhz,predicted_cn0_dbhz
void write_ramp_csv(std::ostream& out, const RampResult& result);

}  // namespace rnsscompat
