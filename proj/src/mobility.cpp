#include "swarmfredy/mobility.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace swarmfredy {

namespace {

constexpr double kKmhToMs = 1.0 / 3.6;

double wrap(double x, double road_length) {
  double r = std::fmod(x, road_length);
  if (r < 0.0) r += road_length;
  // fmod of a tiny negative value can round up to road_length itself.
  return r >= road_length ? 0.0 : r;
}

/// Coordinate along the direction of travel.
double travel_coord(const Vehicle& v, double road_length) {
  return v.direction > 0 ? v.position.x : wrap(road_length - v.position.x, road_length);
}

}  // namespace

double square_law_speed_kmh(double gap_m) { return std::sqrt(std::max(gap_m, 0.0) * 100.0); }

double square_law_gap_m(double speed_kmh) { return speed_kmh * speed_kmh / 100.0; }

int lane_direction(int lane, int lanes) { return lane < lanes / 2 ? 1 : -1; }

int lane_rank(int lane, int lanes) { return lane % (lanes / 2); }

double lane_offset_y(int lane, int lanes, double lane_width) {
  const double off = (lane_rank(lane, lanes) + 0.5) * lane_width;
  return lane_direction(lane, lanes) > 0 ? off : -off;
}

double idm_acceleration(const MobilityParams& p, double speed, double desired_speed, double gap,
                        double approach_rate) {
  const double free_term = std::pow(speed / desired_speed, p.exponent);
  if (!std::isfinite(gap)) return p.max_accel * (1.0 - free_term);
  const double dynamic = speed * p.time_headway +
                         speed * approach_rate / (2.0 * std::sqrt(p.max_accel * p.comfort_decel));
  const double desired_gap = p.min_gap + std::max(0.0, dynamic);
  const double s = std::max(gap, 1e-6);
  return p.max_accel * (1.0 - free_term - (desired_gap / s) * (desired_gap / s));
}

double periodic_delta(double from, double to, double road_length) {
  double d = to - from;
  if (!std::isfinite(road_length)) return d;
  d = std::fmod(d, road_length);
  if (d > road_length / 2) d -= road_length;
  if (d < -road_length / 2) d += road_length;
  return d;
}

double road_distance(const Vec2& a, const Vec2& b, double road_length) {
  const double dx = periodic_delta(a.x, b.x, road_length);
  const double dy = b.y - a.y;
  return std::sqrt(dx * dx + dy * dy);
}

MobilityState init_traffic(const ScenarioConfig& cfg, std::uint64_t seed) {
  MobilityState st;
  st.params = cfg.mobility;
  st.road_length = cfg.road_length;
  st.rng = make_stream(seed, "mobility");
  const int lanes = cfg.lanes;
  const auto& mp = cfg.mobility;

  st.lane_target_speed.resize(lanes);
  std::vector<double> weights(lanes);
  for (int l = 0; l < lanes; ++l) {
    const int r = lane_rank(l, lanes);
    st.lane_target_speed[l] = mp.lane_speeds_kmh[r] * kKmhToMs;
    weights[l] = mp.lane_weights[r];
  }

  std::discrete_distribution<int> pick_lane(weights.begin(), weights.end());
  std::vector<std::vector<NodeId>> members(lanes);
  for (int i = 0; i < cfg.vehicle_count; ++i) members[pick_lane(st.rng)].push_back(static_cast<NodeId>(i));

  const double pitch = mp.vehicle_length + mp.min_gap;
  st.vehicles.resize(cfg.vehicle_count);
  st.lane_order.resize(lanes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> share(1.0);
  for (int l = 0; l < lanes; ++l) {
    const auto& ids = members[l];
    const auto n = ids.size();
    if (n == 0) continue;
    if (static_cast<double>(n) * pitch > cfg.road_length) {
      throw InfeasibleDensity("lane " + std::to_string(l) + " cannot hold " + std::to_string(n) +
                              " vehicles on " + std::to_string(cfg.road_length) + " m");
    }
    const double target_kmh = mp.lane_speeds_kmh[lane_rank(l, lanes)];

    // gap[i] is the headway from vehicle i to vehicle i + 1 (cyclic),
    // following the square law for each vehicle's desired speed.
    std::vector<double> gap(n);
    for (auto& g : gap) {
      const double desired_kmh = target_kmh * (1.0 - mp.speed_spread * unit(st.rng));
      g = std::max(mp.min_gap, square_law_gap_m(desired_kmh));
    }
    const double free_road = cfg.road_length - static_cast<double>(n) * mp.vehicle_length;
    double used = 0.0;
    for (double g : gap) used += g;
    if (used > free_road) {
      // Too dense for the desired speeds: headways shrink by random factors
      // and speeds follow the resulting gaps.
      const double room = free_road - static_cast<double>(n) * mp.min_gap;
      std::vector<double> w(n);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += (w[i] = (gap[i] - mp.min_gap + 1e-9) * share(st.rng));
      for (std::size_t i = 0; i < n; ++i) gap[i] = mp.min_gap + room * w[i] / total;
    } else {
      // Spare road opens up between platoons.
      const auto breaks = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::lround(static_cast<double>(n) / mp.platoon_size)), 1, n);
      std::vector<std::size_t> slots(n);
      std::iota(slots.begin(), slots.end(), std::size_t{0});
      std::shuffle(slots.begin(), slots.end(), st.rng);
      std::vector<double> w(breaks);
      double total = 0.0;
      for (auto& x : w) total += (x = share(st.rng));
      for (std::size_t b = 0; b < breaks; ++b) gap[slots[b]] += (free_road - used) * w[b] / total;
    }

    const double offset = unit(st.rng) * cfg.road_length;
    const int dir = lane_direction(l, lanes);
    const double y = lane_offset_y(l, lanes, mp.lane_width);
    double travel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vehicle& v = st.vehicles[ids[i]];
      v.id = ids[i];
      v.lane = l;
      v.direction = dir;
      const double s = wrap(travel + offset, cfg.road_length);
      v.position = {dir > 0 ? s : wrap(cfg.road_length - s, cfg.road_length), y};
      v.speed = std::min(square_law_speed_kmh(gap[i]), target_kmh) * kKmhToMs;
      v.br_buffer = BRBuffer(cfg.rate_set.k());
      travel += mp.vehicle_length + gap[i];
    }
    st.lane_order[l] = ids;
  }
  return st;
}

double gap_to_leader(const MobilityState& st, NodeId follower) {
  const Vehicle& v = st.vehicles.at(follower);
  const auto& order = st.lane_order.at(v.lane);
  if (order.size() < 2) return std::numeric_limits<double>::infinity();
  const auto it = std::find(order.begin(), order.end(), follower);
  const auto next = std::next(it) == order.end() ? order.begin() : std::next(it);
  const Vehicle& leader = st.vehicles[*next];
  const double ahead = wrap(travel_coord(leader, st.road_length) - travel_coord(v, st.road_length),
                            st.road_length);
  return ahead - st.params.vehicle_length;
}

void advance(MobilityState& st, double dt) {
  const auto& p = st.params;
  const double L = st.road_length;
  for (const auto& order : st.lane_order) {
    const auto n = order.size();
    if (n == 0) continue;
    std::vector<double> gap(n), disp(n), speed(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vehicle& v = st.vehicles[order[i]];
      const Vehicle& leader = st.vehicles[order[(i + 1) % n]];
      gap[i] = n == 1 ? std::numeric_limits<double>::infinity()
                      : wrap(travel_coord(leader, L) - travel_coord(v, L), L) - p.vehicle_length;
      const double v0 = st.lane_target_speed[v.lane];
      const double a = idm_acceleration(p, v.speed, v0, gap[i], n == 1 ? 0.0 : v.speed - leader.speed);
      double vn = v.speed + a * dt;
      double d = 0.0;
      if (vn < 0.0) {
        // Stops inside the step.
        d = -0.5 * v.speed * v.speed / a;
        vn = 0.0;
      } else {
        d = 0.5 * (v.speed + vn) * dt;
      }
      // Leaders never move backwards, so this keeps every gap positive.
      const double limit = gap[i] - std::min(0.1, 0.5 * gap[i]);
      if (d > limit) {
        d = limit;
        vn = std::min(vn, d / dt);
      }
      disp[i] = d;
      speed[i] = vn;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Vehicle& v = st.vehicles[order[i]];
      v.speed = speed[i];
      v.position.x = wrap(v.position.x + v.direction * disp[i], L);
    }
  }
  st.time += dt;
#ifndef NDEBUG
  for (const auto& v : st.vehicles) assert(gap_to_leader(st, v.id) > 0.0);
#endif
}

MobilityState step(MobilityState state, double dt) {
  advance(state, dt);
  return state;
}

}  // namespace swarmfredy
