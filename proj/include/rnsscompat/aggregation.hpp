#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "rnsscompat/antenna.hpp"
#include "rnsscompat/catalog.hpp"

namespace rnsscompat {

using Vec3 = std::array<double, 3>;

struct SatState {
  Vec3 position{};  // Earth-centred inertial, metres
  int plane = 0;
  int slot = 0;
};

// Receiver on a spherical Earth. rx_pattern is indexed by elevation.
struct UserPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double mask_angle_deg = 5.0;
  AntennaPattern rx_pattern;
};

double orbital_radius(const ConstellationSpec& spec);
double orbital_period(const ConstellationSpec& spec);

// Walker-delta circular orbits: plane p has RAAN p * 360 / planes, and slot s
// of plane p has argument of latitude s * 360 / sats_per_plane +
// p * phasing_offset + mean_motion * t. Plane 0 slot 0 sits on the inertial
// x axis at t = 0. Throws ConfigError for t < 0 or an invalid spec.
std::vector<SatState> propagate_constellation(const ConstellationSpec& spec, double t);

// Position of a user fixed to the Earth, which rotates about z from an
// inertial frame aligned with the Earth-fixed frame at t = 0.
Vec3 user_position(const UserPoint& user, double t);

double free_space_path_loss_db(double distance_m, double freq_hz);

struct LinkGeometry {
  double range_m = 0.0;
  double elevation_deg = 0.0;
  double off_boresight_deg = 0.0;  // from the satellite's nadir direction
};

LinkGeometry link_geometry(const Vec3& sat_position, const Vec3& user_pos);

// Power at the receiver output in dBW, or nullopt when the satellite is
// below the user's mask angle. The transmit antenna points at nadir.
std::optional<double> received_power(const SatState& sat, const UserPoint& user, double t, double tx_eirp_dbw,
                                     const AntennaPattern& tx_pattern, double freq_hz);

// Largest single-satellite received power over all elevations at or above
// the user's mask for a satellite at orbital radius `radius_m`.
double max_single_sat_power(double radius_m, const UserPoint& user, double tx_eirp_dbw,
                            const AntennaPattern& tx_pattern, double freq_hz);

struct AggregationResult {
  double g_agg_db = 0.0;
  std::size_t worst_user = 0;
  double worst_time_s = 0.0;
  int visible_count = 0;       // at the worst case
  int max_visible_count = 0;   // over the whole grid
  double aggregate_dbw = 0.0;  // at the worst case
  double max_single_dbw = 0.0;
};

// Worst case over users x times of the aggregate visible power relative to
// the maximum single-satellite power. Throws ConfigError on empty grids and
// ComputationError when no satellite is ever visible.
AggregationResult aggregation_gain(const ConstellationSpec& spec, const std::vector<UserPoint>& users,
                                   const std::vector<double>& times, double freq_hz);

// Same ratio for a fixed satellite set at one instant; the satellites share
// the orbit radius of spec.
AggregationResult aggregation_gain(const ConstellationSpec& spec, const std::vector<SatState>& sats,
                                   const std::vector<UserPoint>& users, double t, double freq_hz);

// Users on a latitude/longitude lattice, inclusive of both ends.
std::vector<UserPoint> user_grid(double lat_min_deg, double lat_max_deg, double lat_step_deg, double lon_min_deg,
                                 double lon_max_deg, double lon_step_deg, double mask_angle_deg,
                                 const AntennaPattern& rx_pattern = {});

std::vector<double> time_grid(double duration_s, double step_s);

void write_aggregation_json(std::ostream& out, const AggregationResult& result,
                            const std::vector<UserPoint>& users);

}  // namespace rnsscompat
