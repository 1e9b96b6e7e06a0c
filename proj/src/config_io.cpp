#include "swarmfredy/config_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace swarmfredy {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigParseError({key + ": cannot parse '" + value + "' as " + what});
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) bad_value(key, v, "a number");
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

template <typename T>
std::string join(const std::vector<T>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_same_v<T, StrategyKind>) {
      out += format_strategy(xs[i]);
    } else if constexpr (std::is_integral_v<T>) {
      out += std::to_string(xs[i]);
    } else {
      out += fmt(xs[i]);
    }
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(to_int<int>(key, item));
  return out;
}

struct Field {
  std::function<void(ExperimentSpec&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentSpec&)> get;
};

#define SF_DOUBLE(path)                                                                          \
  Field {                                                                                        \
    [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.path = to_double(k, v); }, \
        [](const ExperimentSpec& s) { return fmt(s.base.path); }                                 \
  }
#define SF_INT(path, type)                                                                       \
  Field {                                                                                        \
    [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.path = to_int<type>(k, v); }, \
        [](const ExperimentSpec& s) { return std::to_string(s.base.path); }                      \
  }
#define SF_BOOL(path)                                                                            \
  Field {                                                                                        \
    [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.path = to_bool(k, v); }, \
        [](const ExperimentSpec& s) { return fmt(s.base.path); }                                 \
  }
#define SF_DOUBLES(path)                                                                         \
  Field {                                                                                        \
    [](ExperimentSpec& s, const std::string& k, const std::string& v) { s.base.path = to_doubles(k, v); }, \
        [](const ExperimentSpec& s) { return join(s.base.path, ","); }                           \
  }

// Ordered so that serialization is stable.
const std::vector<std::pair<std::string, Field>>& registry() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"road_length", SF_DOUBLE(road_length)},
      {"lanes", SF_INT(lanes, int)},
      {"vehicle_count", SF_INT(vehicle_count, int)},
      {"sim_duration", SF_DOUBLE(sim_duration)},
      {"window", SF_DOUBLE(window)},
      {"comm_range", SF_DOUBLE(radio.comm_range)},
      {"replications", SF_INT(replications, int)},
      {"base_seed", SF_INT(base_seed, std::uint64_t)},
      {"rates",
       {[](ExperimentSpec& s, const std::string& k, const std::string& v) {
          s.base.rate_set = BeaconRateSet(to_ints(k, v));
        },
        [](const ExperimentSpec& s) { return join(s.base.rate_set.rates(), ","); }}},
      {"strategy",
       {[](ExperimentSpec& s, const std::string& k, const std::string& v) {
          try {
            s.base.strategy = parse_strategy(v);
          } catch (const std::invalid_argument& e) {
            throw ConfigParseError({k + ": " + e.what()});
          }
        },
        [](const ExperimentSpec& s) { return format_strategy(s.base.strategy); }}},
      {"strategy.dedup_senders", SF_BOOL(dedup_senders)},
      {"channel.max_q", SF_INT(channel.max_q, int)},
      {"channel.alpha", SF_DOUBLE(channel.alpha)},
      {"radio.d0", SF_DOUBLE(radio.d0)},
      {"radio.d_a", SF_DOUBLE(radio.d_a)},
      {"radio.d_b", SF_DOUBLE(radio.d_b)},
      {"radio.n0", SF_DOUBLE(radio.n0)},
      {"radio.n_a", SF_DOUBLE(radio.n_a)},
      {"radio.n_b", SF_DOUBLE(radio.n_b)},
      {"radio.ref_loss_db", SF_DOUBLE(radio.ref_loss_db)},
      {"radio.tx_power_dbm", SF_DOUBLE(radio.tx_power_dbm)},
      {"radio.rx_sensitivity_dbm",
       {[](ExperimentSpec& s, const std::string& k, const std::string& v) {
          if (v == "auto") {
            s.base.radio.rx_sensitivity_dbm.reset();
          } else {
            s.base.radio.rx_sensitivity_dbm = to_double(k, v);
          }
        },
        [](const ExperimentSpec& s) {
          const auto& r = s.base.radio.rx_sensitivity_dbm;
          return r ? fmt(*r) : std::string("auto");
        }}},
      {"radio.shadowing_sigma_db", SF_DOUBLE(radio.shadowing_sigma_db)},
      {"mobility.lane_speeds_kmh", SF_DOUBLES(mobility.lane_speeds_kmh)},
      {"mobility.lane_weights", SF_DOUBLES(mobility.lane_weights)},
      {"mobility.time_headway", SF_DOUBLE(mobility.time_headway)},
      {"mobility.max_accel", SF_DOUBLE(mobility.max_accel)},
      {"mobility.comfort_decel", SF_DOUBLE(mobility.comfort_decel)},
      {"mobility.min_gap", SF_DOUBLE(mobility.min_gap)},
      {"mobility.exponent", SF_DOUBLE(mobility.exponent)},
      {"mobility.vehicle_length", SF_DOUBLE(mobility.vehicle_length)},
      {"mobility.lane_width", SF_DOUBLE(mobility.lane_width)},
      {"mobility.speed_spread", SF_DOUBLE(mobility.speed_spread)},
      {"mobility.platoon_size", SF_DOUBLE(mobility.platoon_size)},
      {"engine.initial_rate", SF_INT(initial_rate, int)},
      {"engine.warmup_windows", SF_INT(warmup_windows, int)},
      {"metrics.cv_textbook", SF_BOOL(cv_textbook)},
      {"experiment.densities",
       {[](ExperimentSpec& s, const std::string& k, const std::string& v) {
          s.densities = v.empty() ? std::vector<int>{} : to_ints(k, v);
        },
        [](const ExperimentSpec& s) { return join(s.densities, ","); }}},
      {"experiment.strategies",
       {[](ExperimentSpec& s, const std::string& k, const std::string& v) {
          s.strategies.clear();
          if (v.empty()) return;
          for (const auto& item : split(v, ';')) {
            try {
              s.strategies.push_back(parse_strategy(item));
            } catch (const std::invalid_argument& e) {
              throw ConfigParseError({k + ": " + e.what()});
            }
          }
        },
        [](const ExperimentSpec& s) { return join(s.strategies, "; "); }}},
  };
  return fields;
}

#undef SF_DOUBLE
#undef SF_INT
#undef SF_BOOL
#undef SF_DOUBLES

const Field* find_field(const std::string& key) {
  for (const auto& [name, field] : registry()) {
    if (name == key) return &field;
  }
  return nullptr;
}

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "config error:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigParseError::ConfigParseError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : registry()) out.push_back(name);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  const Field* field = find_field(key);
  if (field == nullptr) throw ConfigParseError({"unknown key '" + key + "'"});
  field->set(spec, key, value);
}

ExperimentSpec parse_config(const std::string& text) {
  ExperimentSpec spec;
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    try {
      apply_setting(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigParseError& e) {
      for (const auto& p : e.problems()) problems.push_back("line " + std::to_string(lineno) + ": " + p);
    }
  }
  if (!problems.empty()) throw ConfigParseError(std::move(problems));
  return spec;
}

ExperimentSpec load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError({"cannot open config file '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentSpec& spec) {
  std::string out;
  for (const auto& [name, field] : registry()) {
    out += name + " = " + field.get(spec) + "\n";
  }
  return out;
}

Profile parse_profile(const std::string& name) {
  if (name == "paper") return Profile::Paper;
  if (name == "desk") return Profile::Desk;
  throw ConfigParseError({"unknown profile '" + name + "' (expected desk or paper)"});
}

void apply_profile(ExperimentSpec& spec, Profile profile) {
  auto& b = spec.base;
  if (profile == Profile::Paper) {
    b.road_length = 10000.0;
    b.sim_duration = 150.0;
    b.replications = 50;
    spec.densities = {500, 750, 1000, 1250, 1500, 1750, 2000};
    if (spec.strategies.empty()) {
      for (const auto& p : canonical_sdidi_pairs()) spec.strategies.push_back(FredyStrategy{p});
      spec.strategies.push_back(DifraStrategy{});
    }
  } else {
    b.road_length = 2000.0;
    b.sim_duration = 60.0;
    b.replications = 20;
    spec.densities = {100, 200, 400};
    if (spec.strategies.empty()) {
      spec.strategies = {FredyStrategy{{0.0, 50.0}}, FredyStrategy{{0.0, 250.0}}, DifraStrategy{}};
    }
  }
  b.vehicle_count = spec.densities.front();
}

std::vector<ScenarioConfig> expand_scenarios(const ExperimentSpec& spec) {
  const auto densities = spec.densities.empty() ? std::vector<int>{spec.base.vehicle_count} : spec.densities;
  const auto strategies =
      spec.strategies.empty() ? std::vector<StrategyKind>{spec.base.strategy} : spec.strategies;
  std::vector<ScenarioConfig> out;
  for (int n : densities) {
    for (const auto& s : strategies) {
      ScenarioConfig cfg = spec.base;
      cfg.vehicle_count = n;
      cfg.strategy = s;
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

}  // namespace swarmfredy
