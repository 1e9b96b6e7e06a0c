#include "doctest.h"

#include <algorithm>

#include "swarmfredy/domain.hpp"

using namespace swarmfredy;

namespace {
bool has_error(const std::vector<ConfigError>& errs, const std::string& field, const std::string& reason = {}) {
  return std::any_of(errs.begin(), errs.end(), [&](const ConfigError& e) {
    return e.field == field && (reason.empty() || e.reason == reason);
  });
}
}  // namespace

TEST_CASE("default rate set is 1..10") {
  BeaconRateSet rs;
  CHECK(rs.k() == 10);
  CHECK(rs.br_min() == 1);
  CHECK(rs.br_max() == 10);
  CHECK(rs.index_of(6) == 5);
  CHECK_THROWS_AS(rs.index_of(11), std::out_of_range);
  CHECK(rs.floor_member(0) == 1);
}

TEST_CASE("sparse rate set rounds down to a member") {
  BeaconRateSet rs({1, 2, 5, 10});
  CHECK(rs.floor_member(4) == 2);
  CHECK(rs.floor_member(9) == 5);
  CHECK(rs.floor_member(10) == 10);
  CHECK_FALSE(rs.contains(3));
}

TEST_CASE("omega is derived from alpha and max_q") {
  ChannelParams c;
  CHECK(c.omega() == doctest::Approx(320.0));
  c.max_q = 30;
  CHECK(c.omega() == doctest::Approx(24.0));
  c.alpha = 0.5;
  CHECK(c.omega() == doctest::Approx(15.0));
}

TEST_CASE("default config is valid") {
  ScenarioConfig cfg;
  CHECK(validate_config(cfg).empty());
  CHECK(cfg.window_count() == 150);
  CHECK(cfg.comm_range() == 250.0);
  CHECK_NOTHROW(require_valid(cfg));
}

TEST_CASE("alpha out of range is rejected") {
  ScenarioConfig cfg;
  cfg.channel.alpha = 1.2;
  CHECK(has_error(validate_config(cfg), "channel.alpha"));
  CHECK_THROWS_AS(require_valid(cfg), InvalidConfig);
}

TEST_CASE("equal sdidi thresholds are rejected") {
  ScenarioConfig cfg;
  cfg.strategy = FredyStrategy{{100.0, 100.0}};
  CHECK(has_error(validate_config(cfg), "sdidi", "d1 < d2 required"));
}

TEST_CASE("every violation is reported") {
  ScenarioConfig cfg;
  cfg.channel.alpha = -1.0;
  cfg.vehicle_count = 0;
  cfg.strategy = FredyStrategy{{300.0, 100.0}};
  try {
    require_valid(cfg);
    FAIL("expected InvalidConfig");
  } catch (const InvalidConfig& e) {
    CHECK(e.errors().size() >= 3);
    CHECK(has_error(e.errors(), "channel.alpha"));
    CHECK(has_error(e.errors(), "sdidi", "d1 < d2 required"));
  }
}

TEST_CASE("strategy text round trip") {
  for (const char* text : {"fredy(0,50)", "fredy(50,100)", "difra", "fixed(3)", "fredy(12.5,40)"}) {
    CAPTURE(text);
    CHECK(format_strategy(parse_strategy(text)) == text);
  }
  CHECK(parse_strategy(" FREDY( 0 , 250 ) ") == StrategyKind{FredyStrategy{{0.0, 250.0}}});
  CHECK_THROWS_AS(parse_strategy("fredy(1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy("greedy"), std::invalid_argument);
}

TEST_CASE("table labels") {
  CHECK(strategy_label(FredyStrategy{{0.0, 50.0}}) == "SF(000,050)");
  CHECK(strategy_label(FredyStrategy{{200.0, 250.0}}) == "SF(200,250)");
  CHECK(strategy_label(DifraStrategy{}) == "SD");
  CHECK(strategy_label(FixedStrategy{4}) == "FIXED(4)");
}

TEST_CASE("fifteen canonical sdidi pairs") {
  const auto pairs = canonical_sdidi_pairs();
  REQUIRE(pairs.size() == 15);
  for (const auto& p : pairs) {
    CHECK(p.d1 < p.d2);
    CHECK(p.d2 <= 250.0);
    CHECK(static_cast<int>(p.d1) % 50 == 0);
    CHECK(static_cast<int>(p.d2) % 50 == 0);
  }
  CHECK(std::count(pairs.begin(), pairs.end(), SdidiParams{100.0, 250.0}) == 1);
}

TEST_CASE("br buffer bookkeeping") {
  BRBuffer b(10);
  CHECK(b.empty());
  b.add(2, 10);
  b.add(4, 25);
  CHECK(b.total() == 35);
  CHECK(b.counts() == std::vector<std::uint32_t>{0, 0, 10, 0, 25, 0, 0, 0, 0, 0});
  b.clear();
  CHECK(b.empty());
  CHECK_THROWS(b.add(10));
}
