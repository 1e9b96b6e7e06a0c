#pragma once

// Highway traffic: straight periodic road, lanes split evenly between the two
// directions, IDM car following, no lane changes.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swarmfredy/domain.hpp"
#include "swarmfredy/rng.hpp"

namespace swarmfredy {

class InfeasibleDensity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MobilityState {
  std::vector<Vehicle> vehicles;           // indexed by NodeId
  std::vector<double> lane_target_speed;   // m/s, indexed by lane
  /// Vehicle ids of each lane ordered along the direction of travel. The
  /// order is fixed for the whole run since nobody overtakes.
  std::vector<std::vector<NodeId>> lane_order;
  MobilityParams params;
  double road_length = 0.0;
  double time = 0.0;
  Rng rng;
};

/// Spacing rule linking speed and headway: gap[m] = speed[km/h]^2 / 100.
double square_law_speed_kmh(double gap_m);
double square_law_gap_m(double speed_kmh);

int lane_direction(int lane, int lanes);
/// 0 for the innermost lane of a direction, lanes/2 - 1 for the outermost.
int lane_rank(int lane, int lanes);
double lane_offset_y(int lane, int lanes, double lane_width);

/// IDM acceleration. `gap` is bumper to bumper; `approach_rate` is own
/// speed minus leader speed.
double idm_acceleration(const MobilityParams& p, double speed, double desired_speed, double gap,
                        double approach_rate);

/// Signed shortest displacement from `from` to `to` on a ring of length L.
double periodic_delta(double from, double to, double road_length);
/// Euclidean distance with the x axis wrapped at road_length (pass
/// infinity for an open road).
double road_distance(const Vec2& a, const Vec2& b, double road_length);

MobilityState init_traffic(const ScenarioConfig& cfg, std::uint64_t seed);

/// Advances every vehicle by one IDM step of `dt` seconds, in place.
void advance(MobilityState& state, double dt);
MobilityState step(MobilityState state, double dt);

/// Bumper-to-bumper gap from `follower` to the vehicle ahead of it.
double gap_to_leader(const MobilityState& state, NodeId follower);

}  // namespace swarmfredy
