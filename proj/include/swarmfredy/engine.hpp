#pragma once

// Window loop for one replication and the multi-replication harness.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmfredy/domain.hpp"
#include "swarmfredy/metrics.hpp"
#include "swarmfredy/mobility.hpp"
#include "swarmfredy/radio.hpp"
#include "swarmfredy/rng.hpp"

namespace swarmfredy {

/// Called after the mobility step of every window with the window start time.
using TraceFn = std::function<void(double time, std::span<const Vehicle> vehicles)>;

/// One replication, advanced a window at a time:
///   1. mobility step
///   2. every node broadcasts current_br beacons
///   3. metrics are recorded from the queues
///   4. each node decides its next rate from its own queue only
class Simulation {
public:
  /// Random highway traffic from init_traffic.
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed);
  /// Fixed layout with no mobility; ids are reassigned to match indices.
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<Vehicle> layout);

  void run_window();
  void run(int windows);

  int windows_run() const { return window_; }
  std::span<const Vehicle> vehicles() const { return fleet(); }
  const std::vector<Vehicle>& fleet() const;
  const std::vector<WindowQueue>& last_queues() const { return queues_; }
  const std::vector<MetricsRecord>& records() const { return records_; }
  std::vector<MetricsRecord> take_records() { return std::move(records_); }

  /// Repositions a vehicle of a fixed layout (mobility disabled).
  void move_vehicle(NodeId id, Vec2 position);
  void set_trace(TraceFn trace) { trace_ = std::move(trace); }

private:
  ScenarioConfig cfg_;
  std::optional<MobilityState> mobility_;
  std::vector<Vehicle> static_fleet_;
  Rng radio_rng_;
  Rng sdidi_rng_;
  std::vector<WindowQueue> queues_;
  std::vector<MetricsRecord> records_;
  std::vector<int> previous_br_;
  int window_ = 0;
  TraceFn trace_;

  std::vector<Vehicle>& mutable_fleet();
};

struct ReplicationResult {
  std::string scenario;  // e.g. "200veh"
  std::string strategy;  // table label
  std::string strategy_spec;
  int vehicles = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> records;
  ReplicationSummary summary;
  std::string error;  // set when the replication could not run
};

std::string scenario_label(int vehicles);

ReplicationResult run_replication(const ScenarioConfig& cfg, std::uint64_t seed, int replication = 0,
                                  const TraceFn& trace = {});

struct ExperimentOptions {
  int workers = 1;
  /// Keep per-window records in the returned results.
  bool keep_records = false;
  /// Invoked from worker threads once per finished replication, before
  /// records are dropped.
  std::function<void(const ReplicationResult&)> on_result;
  /// Per-replication trace factory, keyed like the results.
  std::function<TraceFn(const ScenarioConfig&, int replication)> trace_for;
};

/// Runs cfg.replications replications of every config, seeds base_seed + i.
/// Results come back in plan order regardless of worker count.
std::vector<ReplicationResult> run_experiment(const std::vector<ScenarioConfig>& cfgs,
                                              const ExperimentOptions& options = {});

}  // namespace swarmfredy
