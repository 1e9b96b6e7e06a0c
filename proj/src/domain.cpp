#include "swarmfredy/domain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace swarmfredy {

BeaconRateSet::BeaconRateSet() : rates_(10) {
  std::iota(rates_.begin(), rates_.end(), 1);
}

BeaconRateSet::BeaconRateSet(std::vector<int> rates) : rates_(std::move(rates)) {}

bool BeaconRateSet::contains(int rate) const {
  return std::binary_search(rates_.begin(), rates_.end(), rate);
}

std::size_t BeaconRateSet::index_of(int rate) const {
  auto it = std::lower_bound(rates_.begin(), rates_.end(), rate);
  if (it == rates_.end() || *it != rate) {
    throw std::out_of_range("rate " + std::to_string(rate) + " Hz is not in the rate set");
  }
  return static_cast<std::size_t>(it - rates_.begin());
}

int BeaconRateSet::floor_member(int rate) const {
  auto it = std::upper_bound(rates_.begin(), rates_.end(), rate);
  if (it == rates_.begin()) return rates_.front();
  return *std::prev(it);
}

void BRBuffer::clear() { std::fill(counts_.begin(), counts_.end(), 0u); }

bool BRBuffer::empty() const {
  return std::all_of(counts_.begin(), counts_.end(), [](auto c) { return c == 0; });
}

std::uint64_t BRBuffer::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_args(const std::string& text, const std::string& name) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      trim(text.substr(close + 1)) != "") {
    throw std::invalid_argument("malformed strategy '" + text + "', expected " + name + "(...)");
  }
  std::vector<double> out;
  std::stringstream ss(text.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) {
      throw std::invalid_argument("strategy argument '" + t + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

StrategyKind parse_strategy(const std::string& raw) {
  std::string text = trim(raw);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "difra") return DifraStrategy{};
  const auto head = trim(text.substr(0, text.find('(')));
  if (head == "fredy") {
    const auto args = parse_args(text, "fredy");
    if (args.size() != 2) throw std::invalid_argument("fredy(D1,D2) takes two distances");
    return FredyStrategy{SdidiParams{args[0], args[1]}};
  }
  if (head == "fixed") {
    const auto args = parse_args(text, "fixed");
    if (args.size() != 1 || args[0] != std::floor(args[0])) {
      throw std::invalid_argument("fixed(R) takes one integer rate");
    }
    return FixedStrategy{static_cast<int>(args[0])};
  }
  throw std::invalid_argument("unknown strategy '" + raw + "' (expected fredy(D1,D2), difra or fixed(R))");
}

std::string format_strategy(const StrategyKind& kind) {
  struct Visitor {
    std::string operator()(const FredyStrategy& f) const {
      return "fredy(" + format_number(f.sdidi.d1) + "," + format_number(f.sdidi.d2) + ")";
    }
    std::string operator()(const DifraStrategy&) const { return "difra"; }
    std::string operator()(const FixedStrategy& f) const {
      return "fixed(" + std::to_string(f.rate) + ")";
    }
  };
  return std::visit(Visitor{}, kind);
}

std::string strategy_label(const StrategyKind& kind) {
  struct Visitor {
    std::string operator()(const FredyStrategy& f) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "SF(%03.0f,%03.0f)", f.sdidi.d1, f.sdidi.d2);
      return buf;
    }
    std::string operator()(const DifraStrategy&) const { return "SD"; }
    std::string operator()(const FixedStrategy& f) const {
      return "FIXED(" + std::to_string(f.rate) + ")";
    }
  };
  return std::visit(Visitor{}, kind);
}

std::vector<SdidiParams> canonical_sdidi_pairs() {
  std::vector<SdidiParams> pairs;
  for (int d1 = 0; d1 <= 200; d1 += 50) {
    for (int d2 = d1 + 50; d2 <= 250; d2 += 50) {
      pairs.push_back({static_cast<double>(d1), static_cast<double>(d2)});
    }
  }
  return pairs;
}

int ScenarioConfig::window_count() const {
  return static_cast<int>(std::floor(sim_duration / window + 1e-9));
}

namespace {

std::string join_errors(const std::vector<ConfigError>& errors) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e.field + ": " + e.reason;
  return msg;
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<ConfigError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<ConfigError> validate_config(const ScenarioConfig& cfg) {
  std::vector<ConfigError> errs;
  auto check = [&](bool ok, const char* field, std::string reason) {
    if (!ok) errs.push_back({field, std::move(reason)});
  };

  check(cfg.road_length > 0.0, "road_length", "must be positive");
  check(cfg.lanes > 0 && cfg.lanes % 2 == 0, "lanes", "must be a positive even number");
  check(cfg.vehicle_count >= 1, "vehicle_count", "must be at least 1");
  check(cfg.window > 0.0, "window", "must be positive");
  check(cfg.sim_duration >= cfg.window, "sim_duration", "must cover at least one window");
  check(cfg.replications >= 1, "replications", "must be at least 1");

  check(cfg.channel.max_q > 0, "channel.max_q", "must be positive");
  check(cfg.channel.alpha >= 0.0 && cfg.channel.alpha <= 1.0, "channel.alpha", "must lie in [0,1]");

  const auto& rates = cfg.rate_set.rates();
  bool rates_ok = !rates.empty() && rates.front() > 0;
  for (std::size_t i = 1; rates_ok && i < rates.size(); ++i) rates_ok = rates[i] > rates[i - 1];
  check(rates_ok, "rates", "must be non-empty, positive and strictly increasing");

  const auto& r = cfg.radio;
  check(r.comm_range > 0.0, "comm_range", "must be positive");
  check(r.d0 > 0.0 && r.d0 < r.d_a && r.d_a < r.d_b, "radio.distances", "0 < d0 < d_a < d_b required");
  check(r.n0 > 0.0 && r.n_a > 0.0 && r.n_b > 0.0, "radio.exponents", "all exponents must be positive");
  check(r.shadowing_sigma_db >= 0.0, "radio.shadowing_sigma_db", "must be non-negative");

  const auto& m = cfg.mobility;
  const std::size_t per_dir = cfg.lanes > 0 ? static_cast<std::size_t>(cfg.lanes / 2) : 0;
  check(m.lane_speeds_kmh.size() == per_dir, "mobility.lane_speeds_kmh",
        "needs one entry per lane of a direction");
  check(m.lane_weights.size() == per_dir, "mobility.lane_weights",
        "needs one entry per lane of a direction");
  bool speeds_ok = std::all_of(m.lane_speeds_kmh.begin(), m.lane_speeds_kmh.end(),
                               [](double v) { return v > 0.0; });
  for (std::size_t i = 1; speeds_ok && i < m.lane_speeds_kmh.size(); ++i) {
    speeds_ok = m.lane_speeds_kmh[i] < m.lane_speeds_kmh[i - 1];
  }
  check(speeds_ok, "mobility.lane_speeds_kmh", "must be positive and decrease from inner to outer lane");
  check(std::all_of(m.lane_weights.begin(), m.lane_weights.end(), [](double w) { return w >= 0.0; }) &&
            std::accumulate(m.lane_weights.begin(), m.lane_weights.end(), 0.0) > 0.0,
        "mobility.lane_weights", "must be non-negative with a positive sum");
  check(m.time_headway > 0.0 && m.max_accel > 0.0 && m.comfort_decel > 0.0 && m.min_gap > 0.0 &&
            m.exponent > 0.0 && m.vehicle_length > 0.0 && m.lane_width > 0.0,
        "mobility", "IDM constants and vehicle dimensions must be positive");
  check(m.speed_spread >= 0.0 && m.speed_spread < 1.0, "mobility.speed_spread", "must lie in [0,1)");
  check(m.platoon_size >= 1.0, "mobility.platoon_size", "must be at least 1");

  if (const auto* f = std::get_if<FredyStrategy>(&cfg.strategy)) {
    const auto& s = f->sdidi;
    check(s.d1 >= 0.0, "sdidi", "d1 >= 0 required");
    check(s.d1 < s.d2, "sdidi", "d1 < d2 required");
    check(s.d2 <= r.comm_range, "sdidi", "d2 <= comm_range required");
  } else if (const auto* x = std::get_if<FixedStrategy>(&cfg.strategy)) {
    check(cfg.rate_set.contains(x->rate), "strategy", "fixed rate must be in the rate set");
  }
  check(rates_ok && cfg.rate_set.contains(cfg.initial_rate), "engine.initial_rate",
        "must be in the rate set");
  check(cfg.warmup_windows >= 0, "engine.warmup_windows", "must be non-negative");
  return errs;
}

ScenarioConfig require_valid(ScenarioConfig cfg) {
  auto errs = validate_config(cfg);
  if (!errs.empty()) throw InvalidConfig(std::move(errs));
  return cfg;
}

}  // namespace swarmfredy
