#pragma once

// Small hand-built layouts shared by the engine and acceptance tests.

#include <vector>

#include "swarmfredy/domain.hpp"

namespace swarmfredy::testing {

inline Vehicle parked(double x, double y = 0.0, int rate = 10) {
  Vehicle v;
  v.position = {x, y};
  v.current_br = rate;
  v.advertised_dbr = rate;
  v.speed = 0.0;
  return v;
}

/// Four vehicles in mutual range, two pairs 20 m apart.
inline std::vector<Vehicle> four_node_cluster() {
  return {parked(1000.0), parked(1010.0), parked(1020.0, 3.5), parked(1030.0, 3.5)};
}

/// omega = 24: the channel of the four-node worked example.
inline ScenarioConfig small_channel_config(StrategyKind strategy) {
  ScenarioConfig cfg;
  cfg.channel.max_q = 30;
  cfg.channel.alpha = 0.8;
  cfg.strategy = strategy;
  return cfg;
}

}  // namespace swarmfredy::testing
