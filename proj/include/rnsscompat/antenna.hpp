#pragma once

#include <vector>

namespace rnsscompat {

// Gain versus angle, interpolated linearly in dB and clamped at the ends.
// The angle axis is whatever the owner defines: off-boresight for a
// transmitter, elevation for a user antenna.
class AntennaPattern {
 public:
  struct Sample {
    double angle_deg = 0.0;
    double gain_dbi = 0.0;
    bool operator==(const Sample&) const = default;
  };

  AntennaPattern();
  // Throws ConfigError if the samples are empty or angles do not strictly increase.
  explicit AntennaPattern(std::vector<Sample> samples);

  static AntennaPattern isotropic(double gain_dbi = 0.0);

  double gain_dbi(double angle_deg) const;
  const std::vector<Sample>& samples() const { return samples_; }

  bool operator==(const AntennaPattern&) const = default;

 private:
  std::vector<Sample> samples_;
};

}  // namespace rnsscompat
