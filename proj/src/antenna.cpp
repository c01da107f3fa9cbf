#include "rnsscompat/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnsscompat/error.hpp"

namespace rnsscompat {

AntennaPattern::AntennaPattern() : samples_{{0.0, 0.0}} {}

AntennaPattern::AntennaPattern(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw ConfigError("antenna pattern: samples must not be empty");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].angle_deg) || !std::isfinite(samples_[i].gain_dbi)) {
      throw ConfigError("antenna pattern: sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(samples_[i].angle_deg > samples_[i - 1].angle_deg)) {
      throw ConfigError("antenna pattern: angle_deg must be strictly increasing");
    }
  }
}

AntennaPattern AntennaPattern::isotropic(double gain_dbi) {
  return AntennaPattern({{0.0, gain_dbi}});
}

double AntennaPattern::gain_dbi(double angle_deg) const {
  if (angle_deg <= samples_.front().angle_deg) return samples_.front().gain_dbi;
  if (angle_deg >= samples_.back().angle_deg) return samples_.back().gain_dbi;
  auto hi = std::upper_bound(samples_.begin(), samples_.end(), angle_deg,
                             [](double a, const Sample& s) { return a < s.angle_deg; });
  auto lo = hi - 1;
  double w = (angle_deg - lo->angle_deg) / (hi->angle_deg - lo->angle_deg);
  return lo->gain_dbi + w * (hi->gain_dbi - lo->gain_dbi);
}

}  // namespace rnsscompat
