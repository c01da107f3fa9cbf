#include "rnsscompat/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "rnsscompat/error.hpp"

namespace rnsscompat {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

void require_valid(const ConstellationSpec& spec) {
  const auto v = validate_constellation(spec);
  if (!v.empty()) throw ConfigError("constellation '" + spec.id + "': " + v.front().field + ": " + v.front().message);
}

double link_power(double range_m, double off_boresight_deg, double elevation_deg, const UserPoint& user,
                  double tx_eirp_dbw, const AntennaPattern& tx_pattern, double freq_hz) {
  return tx_eirp_dbw + tx_pattern.gain_dbi(off_boresight_deg) - free_space_path_loss_db(range_m, freq_hz) +
         user.rx_pattern.gain_dbi(elevation_deg);
}

struct Evaluation {
  double linear_sum = 0.0;
  int visible = 0;
};

Evaluation evaluate(const std::vector<SatState>& sats, const UserPoint& user, double t, double eirp,
                    const AntennaPattern& tx, double freq) {
  Evaluation e;
  for (const auto& s : sats) {
    if (auto p = received_power(s, user, t, eirp, tx, freq)) {
      e.linear_sum += db_to_linear(*p);
      ++e.visible;
    }
  }
  return e;
}

}  // namespace

double orbital_radius(const ConstellationSpec& spec) { return kEarthRadius + spec.altitude_m; }

double orbital_period(const ConstellationSpec& spec) {
  const double a = orbital_radius(spec);
  return 2.0 * kPi * std::sqrt(a * a * a / kEarthMu);
}

std::vector<SatState> propagate_constellation(const ConstellationSpec& spec, double t) {
  if (t < 0.0) throw ConfigError("propagate_constellation: t must be >= 0");
  require_valid(spec);
  const double a = orbital_radius(spec);
  const double n = std::sqrt(kEarthMu / (a * a * a));
  const double inc = deg_to_rad(spec.inclination_deg);
  std::vector<SatState> out;
  out.reserve(static_cast<std::size_t>(spec.planes * spec.sats_per_plane));
  for (int p = 0; p < spec.planes; ++p) {
    const double raan = deg_to_rad(360.0 * p / spec.planes);
    for (int s = 0; s < spec.sats_per_plane; ++s) {
      const double u =
          deg_to_rad(360.0 * s / spec.sats_per_plane + p * spec.phasing_offset_deg) + n * t;
      const double cu = std::cos(u), su = std::sin(u);
      const double co = std::cos(raan), so = std::sin(raan);
      const double ci = std::cos(inc), si = std::sin(inc);
      SatState st;
      st.plane = p;
      st.slot = s;
      st.position = {a * (co * cu - so * su * ci), a * (so * cu + co * su * ci), a * su * si};
      out.push_back(st);
    }
  }
  return out;
}

Vec3 user_position(const UserPoint& user, double t) {
  const double lat = deg_to_rad(user.latitude_deg);
  const double lon = deg_to_rad(user.longitude_deg) + kEarthRotationRate * t;
  return {kEarthRadius * std::cos(lat) * std::cos(lon), kEarthRadius * std::cos(lat) * std::sin(lon),
          kEarthRadius * std::sin(lat)};
}

double free_space_path_loss_db(double distance_m, double freq_hz) {
  return 20.0 * std::log10(4.0 * kPi * distance_m * freq_hz / kSpeedOfLight);
}

LinkGeometry link_geometry(const Vec3& sat_position, const Vec3& user_pos) {
  const Vec3 los = sub(sat_position, user_pos);
  LinkGeometry g;
  g.range_m = norm(los);
  const double up = dot(los, user_pos) / (g.range_m * norm(user_pos));
  g.elevation_deg = rad_to_deg(std::asin(std::clamp(up, -1.0, 1.0)));
  const double nadir = dot(los, sat_position) / (g.range_m * norm(sat_position));
  g.off_boresight_deg = rad_to_deg(std::acos(std::clamp(nadir, -1.0, 1.0)));
  return g;
}

std::optional<double> received_power(const SatState& sat, const UserPoint& user, double t, double tx_eirp_dbw,
                                     const AntennaPattern& tx_pattern, double freq_hz) {
  if (!(freq_hz > 0.0)) throw ConfigError("received_power: frequency must be > 0");
  const LinkGeometry g = link_geometry(sat.position, user_position(user, t));
  if (g.elevation_deg < user.mask_angle_deg) return std::nullopt;
  return link_power(g.range_m, g.off_boresight_deg, g.elevation_deg, user, tx_eirp_dbw, tx_pattern, freq_hz);
}

double max_single_sat_power(double radius_m, const UserPoint& user, double tx_eirp_dbw,
                            const AntennaPattern& tx_pattern, double freq_hz) {
  const double R = kEarthRadius;
  auto at = [&](double elev_deg) {
    if (elev_deg >= 90.0) return link_power(radius_m - R, 0.0, 90.0, user, tx_eirp_dbw, tx_pattern, freq_hz);
    const double e = deg_to_rad(elev_deg);
    const double range = std::sqrt(radius_m * radius_m - R * R * std::cos(e) * std::cos(e)) - R * std::sin(e);
    const double eta = rad_to_deg(std::asin(R * std::cos(e) / radius_m));
    return link_power(range, eta, elev_deg, user, tx_eirp_dbw, tx_pattern, freq_hz);
  };
  const double lo = std::max(0.0, user.mask_angle_deg);
  constexpr int kSteps = 9000;
  double best = at(90.0);
  double best_e = 90.0;
  for (int i = 0; i < kSteps; ++i) {
    const double e = lo + (90.0 - lo) * i / kSteps;
    const double p = at(e);
    if (p > best) {
      best = p;
      best_e = e;
    }
  }
  // Golden-section refinement around the best grid point.
  const double step = (90.0 - lo) / kSteps;
  double a = std::max(lo, best_e - step), b = std::min(90.0, best_e + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c = b - gr * (b - a), d = a + gr * (b - a);
    if (at(c) > at(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::max(best, at(0.5 * (a + b)));
}

AggregationResult aggregation_gain(const ConstellationSpec& spec, const std::vector<UserPoint>& users,
                                   const std::vector<double>& times, double freq_hz) {
  if (users.empty() || times.empty()) throw ConfigError("aggregation_gain: user and time grids must be nonempty");
  require_valid(spec);
  std::vector<double> max_single(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    max_single[u] = max_single_sat_power(orbital_radius(spec), users[u], spec.tx_eirp_dbw, spec.tx_pattern, freq_hz);
  }
  AggregationResult best;
  bool found = false;
  for (double t : times) {
    const auto sats = propagate_constellation(spec, t);
    for (std::size_t u = 0; u < users.size(); ++u) {
      const Evaluation e = evaluate(sats, users[u], t, spec.tx_eirp_dbw, spec.tx_pattern, freq_hz);
      best.max_visible_count = std::max(best.max_visible_count, e.visible);
      if (e.visible == 0) continue;
      const double g = linear_to_db(e.linear_sum) - max_single[u];
      if (!found || g > best.g_agg_db) {
        found = true;
        best.g_agg_db = g;
        best.worst_user = u;
        best.worst_time_s = t;
        best.visible_count = e.visible;
        best.aggregate_dbw = linear_to_db(e.linear_sum);
        best.max_single_dbw = max_single[u];
      }
    }
  }
  if (!found) throw ComputationError("aggregation_gain: no satellite visible at any user and time");
  return best;
}

AggregationResult aggregation_gain(const ConstellationSpec& spec, const std::vector<SatState>& sats,
                                   const std::vector<UserPoint>& users, double t, double freq_hz) {
  if (users.empty() || sats.empty()) throw ConfigError("aggregation_gain: satellite and user sets must be nonempty");
  AggregationResult best;
  bool found = false;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const double single =
        max_single_sat_power(orbital_radius(spec), users[u], spec.tx_eirp_dbw, spec.tx_pattern, freq_hz);
    const Evaluation e = evaluate(sats, users[u], t, spec.tx_eirp_dbw, spec.tx_pattern, freq_hz);
    best.max_visible_count = std::max(best.max_visible_count, e.visible);
    if (e.visible == 0) continue;
    const double g = linear_to_db(e.linear_sum) - single;
    if (!found || g > best.g_agg_db) {
      found = true;
      best = {g, u, t, e.visible, best.max_visible_count, linear_to_db(e.linear_sum), single};
    }
  }
  if (!found) throw ComputationError("aggregation_gain: no satellite visible at any user");
  return best;
}

std::vector<UserPoint> user_grid(double lat_min_deg, double lat_max_deg, double lat_step_deg, double lon_min_deg,
                                 double lon_max_deg, double lon_step_deg, double mask_angle_deg,
                                 const AntennaPattern& rx_pattern) {
  if (!(lat_step_deg > 0.0) || !(lon_step_deg > 0.0)) throw ConfigError("user_grid: steps must be > 0");
  if (lat_min_deg < -90.0 || lat_max_deg > 90.0 || lat_min_deg > lat_max_deg || lon_min_deg > lon_max_deg) {
    throw ConfigError("user_grid: invalid latitude/longitude range");
  }
  if (!(mask_angle_deg >= 0.0 && mask_angle_deg < 90.0)) throw ConfigError("user_grid: mask angle must be in [0, 90)");
  std::vector<UserPoint> users;
  for (double lat = lat_min_deg; lat <= lat_max_deg + 1e-9; lat += lat_step_deg) {
    for (double lon = lon_min_deg; lon <= lon_max_deg + 1e-9; lon += lon_step_deg) {
      users.push_back({lat, lon, mask_angle_deg, rx_pattern});
    }
  }
  return users;
}

std::vector<double> time_grid(double duration_s, double step_s) {
  if (!(step_s > 0.0) || duration_s < 0.0) throw ConfigError("time_grid: need step > 0 and duration >= 0");
  std::vector<double> t;
  for (std::size_t k = 0; static_cast<double>(k) * step_s <= duration_s + 1e-9; ++k) {
    t.push_back(static_cast<double>(k) * step_s);
  }
  return t;
}

void write_aggregation_json(std::ostream& out, const AggregationResult& r, const std::vector<UserPoint>& users) {
  nlohmann::json doc = {{"g_agg_db", r.g_agg_db},
                        {"worst_time", r.worst_time_s},
                        {"visible_count", r.visible_count},
                        {"max_visible_count", r.max_visible_count},
                        {"aggregate_dbw", r.aggregate_dbw},
                        {"max_single_sat_dbw", r.max_single_dbw}};
  if (r.worst_user < users.size()) {
    const auto& u = users[r.worst_user];
    doc["worst_user"] = {{"latitude_deg", u.latitude_deg}, {"longitude_deg", u.longitude_deg},
                         {"mask_angle_deg", u.mask_angle_deg}};
  }
  out << doc.dump(2) << '\n';
}

}  // namespace rnsscompat
