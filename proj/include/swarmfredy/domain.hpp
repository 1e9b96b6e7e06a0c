#pragma once

// Core value types shared by every stage of the beaconing simulator.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace swarmfredy {

using NodeId = std::uint32_t;

/// Allowed beacon rates in Hz, strictly increasing.
class BeaconRateSet {
public:
  BeaconRateSet();  // {1, ..., 10}
  explicit BeaconRateSet(std::vector<int> rates);

  const std::vector<int>& rates() const { return rates_; }
  int br_min() const { return rates_.front(); }
  int br_max() const { return rates_.back(); }
  std::size_t k() const { return rates_.size(); }

  bool contains(int rate) const;
  /// Position of `rate` in the set; throws std::out_of_range if absent.
  std::size_t index_of(int rate) const;
  /// Largest member not above `rate` (br_min when rate is below the set).
  int floor_member(int rate) const;

  bool operator==(const BeaconRateSet&) const = default;

private:
  std::vector<int> rates_;
};

struct ChannelParams {
  int max_q = 400;     // beacons per window
  double alpha = 0.8;  // usable fraction of max_q

  /// Effective channel capacity; always derived, never stored.
  double omega() const { return alpha * static_cast<double>(max_q); }

  bool operator==(const ChannelParams&) const = default;
};

/// Distance thresholds of the stochastic distance discriminant.
struct SdidiParams {
  double d1 = 0.0;
  double d2 = 50.0;

  bool operator==(const SdidiParams&) const = default;
};

struct FredyStrategy {
  SdidiParams sdidi;
  bool operator==(const FredyStrategy&) const = default;
};
struct DifraStrategy {
  bool operator==(const DifraStrategy&) const = default;
};
struct FixedStrategy {
  int rate = 10;
  bool operator==(const FixedStrategy&) const = default;
};

using StrategyKind = std::variant<FredyStrategy, DifraStrategy, FixedStrategy>;

/// Parses `fredy(D1,D2)`, `difra` or `fixed(R)`; throws std::invalid_argument.
StrategyKind parse_strategy(const std::string& text);
/// Inverse of parse_strategy.
std::string format_strategy(const StrategyKind& kind);
/// Short table label: SF(000,050), SD or FIXED(R).
std::string strategy_label(const StrategyKind& kind);

/// The 15 (d1, d2) pairs: multiples of 50 m with 0 <= d1 < d2 <= 250.
std::vector<SdidiParams> canonical_sdidi_pairs();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

inline constexpr int kBeaconSizeBytes = 100;

struct Beacon {
  NodeId sender_id = 0;
  Vec2 position;
  double speed = 0.0;
  int heading = 1;
  int dbr = 0;
  double timestamp = 0.0;
  int size_bytes = kBeaconSizeBytes;
};

/// Per-rate request counts accumulated during one adaptation window.
class BRBuffer {
public:
  explicit BRBuffer(std::size_t k = 10) : counts_(k, 0) {}

  void add(std::size_t index, std::uint32_t n = 1) { counts_.at(index) += n; }
  void clear();
  bool empty() const;
  std::uint64_t total() const;

  const std::vector<std::uint32_t>& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }

  bool operator==(const BRBuffer&) const = default;

private:
  std::vector<std::uint32_t> counts_;
};

struct Vehicle {
  NodeId id = 0;
  Vec2 position;
  int lane = 0;
  double speed = 0.0;
  int direction = 1;
  int current_br = 10;
  int advertised_dbr = 10;  // stamped into outgoing beacons
  BRBuffer br_buffer;
  int adaptation_count = 0;
};

struct RadioParams {
  double comm_range = 250.0;
  double d0 = 1.0;
  double d_a = 90.0;
  double d_b = 500.0;
  double n0 = 1.9;
  double n_a = 3.8;
  double n_b = 3.8;
  /// Free-space loss at d0 for 5.8 GHz.
  double ref_loss_db = 47.7163;
  double tx_power_dbm = 20.0;
  /// Unset means calibrated so that the deterministic cutoff equals comm_range.
  std::optional<double> rx_sensitivity_dbm;
  double shadowing_sigma_db = 0.0;

  bool operator==(const RadioParams&) const = default;
};

struct MobilityParams {
  /// Target speeds per lane of one direction, innermost first (km/h).
  std::vector<double> lane_speeds_kmh{120.0, 100.0, 80.0};
  /// Lane assignment weights, innermost first.
  std::vector<double> lane_weights{0.25, 0.35, 0.40};
  double time_headway = 1.5;   // s
  double max_accel = 1.0;      // m/s^2
  double comfort_decel = 1.5;  // m/s^2
  double min_gap = 2.0;        // m
  double exponent = 4.0;
  double vehicle_length = 5.0;  // m
  /// Desired speeds are drawn from [1 - speed_spread, 1] x lane target.
  double speed_spread = 0.3;
  /// Mean vehicles per platoon at placement; free road goes between platoons.
  double platoon_size = 10.0;
  double lane_width = 3.5;      // m

  bool operator==(const MobilityParams&) const = default;
};

struct ScenarioConfig {
  double road_length = 10000.0;
  int lanes = 6;
  int vehicle_count = 500;
  double sim_duration = 150.0;
  double window = 1.0;
  ChannelParams channel;
  BeaconRateSet rate_set;
  StrategyKind strategy = FredyStrategy{};
  bool dedup_senders = false;
  int replications = 50;
  std::uint64_t base_seed = 1;
  RadioParams radio;
  MobilityParams mobility;
  int initial_rate = 10;
  int warmup_windows = 0;
  bool cv_textbook = false;

  double comm_range() const { return radio.comm_range; }
  int window_count() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigError {
  std::string field;
  std::string reason;
};

class InvalidConfig : public std::runtime_error {
public:
  explicit InvalidConfig(std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

private:
  std::vector<ConfigError> errors_;
};

/// Every violated invariant, in field order. Empty means valid.
std::vector<ConfigError> validate_config(const ScenarioConfig& cfg);

/// Returns cfg unchanged or throws InvalidConfig listing all violations.
ScenarioConfig require_valid(ScenarioConfig cfg);

}  // namespace swarmfredy
