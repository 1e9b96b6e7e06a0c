#pragma once

// Flat `key = value` configuration files with dotted sections.
//
//   vehicle_count = 1000
//   channel.max_q = 400
//   strategy = fredy(50,100)
//   experiment.strategies = fredy(0,50); fredy(0,250); difra
//
// Blank lines and `#` comments are ignored. Unknown keys are rejected.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swarmfredy/domain.hpp"

namespace swarmfredy {

class ConfigParseError : public std::runtime_error {
public:
  explicit ConfigParseError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

private:
  std::vector<std::string> problems_;
};

/// A base scenario plus the density and strategy axes an experiment sweeps.
struct ExperimentSpec {
  ScenarioConfig base;
  std::vector<int> densities;               // empty: base.vehicle_count only
  std::vector<StrategyKind> strategies;     // empty: base.strategy only

  bool operator==(const ExperimentSpec&) const = default;
};

/// Every key accepted in a config file, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value; throws ConfigParseError on unknown
/// keys or malformed values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize_config(s)) == s.
std::string serialize_config(const ExperimentSpec& spec);

/// Paper-scale and desk-scale presets applied on top of a spec.
enum class Profile { Paper, Desk };
Profile parse_profile(const std::string& name);
void apply_profile(ExperimentSpec& spec, Profile profile);

/// Expands the density and strategy axes into one scenario per cell,
/// density-major.
std::vector<ScenarioConfig> expand_scenarios(const ExperimentSpec& spec);

}  // namespace swarmfredy
