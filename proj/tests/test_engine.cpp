#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "swarmfredy/engine.hpp"
#include "swarmfredy/report.hpp"

using namespace swarmfredy;
using namespace swarmfredy::testing;

namespace {

bool all_at(const Simulation& sim, int rate) {
  const auto& f = sim.fleet();
  return std::all_of(f.begin(), f.end(), [&](const Vehicle& v) { return v.current_br == rate; });
}

// Windows until every node sits at `rate`, or -1 if it never happens.
int windows_until(Simulation& sim, int rate, int limit) {
  for (int w = 1; w <= limit; ++w) {
    sim.run_window();
    if (all_at(sim, rate)) return w;
  }
  return -1;
}

ScenarioConfig tiny_highway(StrategyKind s) {
  ScenarioConfig cfg;
  cfg.road_length = 1000.0;
  cfg.vehicle_count = 60;
  cfg.sim_duration = 10.0;
  cfg.replications = 3;
  cfg.strategy = s;
  return cfg;
}

std::string summary_text(const std::vector<ReplicationResult>& rs) {
  std::ostringstream out;
  write_summary_csv(out, rs);
  return out.str();
}

}  // namespace

TEST_CASE("four-node cluster settles at 6 Hz and splits back to 10 Hz") {
  for (const StrategyKind& s : {StrategyKind{FredyStrategy{{0.0, 250.0}}}, StrategyKind{FredyStrategy{{0.0, 50.0}}},
                                StrategyKind{DifraStrategy{}}}) {
    CAPTURE(format_strategy(s));
    Simulation sim(small_channel_config(s), 1, four_node_cluster());
    const int settle = windows_until(sim, 6, 3);
    CHECK(settle >= 1);
    CHECK(settle <= 3);
    for (int w = 0; w < 10; ++w) {
      sim.run_window();
      CHECK(all_at(sim, 6));
    }
    for (const auto& q : sim.last_queues()) {
      CHECK(q.entries.size() + q.own_pending == 24);
    }

    // Two pairs, 2 km apart.
    sim.move_vehicle(2, {3020.0, 3.5});
    sim.move_vehicle(3, {3030.0, 3.5});
    const int split = windows_until(sim, 10, 3);
    CHECK(split >= 1);
    CHECK(split <= 3);
    sim.run(5);
    CHECK(all_at(sim, 10));
  }
}

TEST_CASE("two isolated pairs stay at 10 Hz") {
  auto layout = std::vector<Vehicle>{parked(0.0), parked(10.0), parked(5000.0), parked(5010.0)};
  Simulation sim(small_channel_config(FredyStrategy{{0.0, 250.0}}), 1, layout);
  for (int w = 0; w < 20; ++w) {
    sim.run_window();
    CHECK(all_at(sim, 10));
  }
  for (const auto& r : sim.records()) {
    CHECK(r.eta == doctest::Approx(20.0 / 30.0 * 100.0));
    CHECK_FALSE(r.adapted);
    CHECK(r.sigma.has_value());
    CHECK(*r.sigma == 0.0);
  }
}

TEST_CASE("records carry one row per node and window") {
  Simulation sim(tiny_highway(DifraStrategy{}), 4);
  sim.run(5);
  CHECK(sim.records().size() == 300);
  CHECK(sim.windows_run() == 5);
  CHECK(sim.records().back().window_index == 4);
  CHECK_THROWS_AS(sim.move_vehicle(0, {0.0, 0.0}), std::logic_error);
}

TEST_CASE("trace sees every window") {
  Simulation sim(tiny_highway(DifraStrategy{}), 4);
  std::vector<double> times;
  sim.set_trace([&](double t, std::span<const Vehicle> vs) {
    times.push_back(t);
    CHECK(vs.size() == 60);
  });
  sim.run(3);
  CHECK(times == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("replications are reproducible") {
  const auto cfg = tiny_highway(FredyStrategy{{0.0, 150.0}});
  const auto a = run_replication(cfg, 17);
  const auto b = run_replication(cfg, 17);
  const auto c = run_replication(cfg, 18);
  std::ostringstream sa, sb, sc;
  write_records_csv(sa, 0, a.records);
  write_records_csv(sb, 0, b.records);
  write_records_csv(sc, 0, c.records);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
  CHECK(a.scenario == "60veh");
  CHECK(a.strategy == "SF(000,150)");
}

TEST_CASE("worker count does not change results") {
  std::vector<ScenarioConfig> plan{tiny_highway(FredyStrategy{{0.0, 50.0}}), tiny_highway(DifraStrategy{})};
  ExperimentOptions one;
  ExperimentOptions four;
  four.workers = 4;
  const auto a = run_experiment(plan, one);
  const auto b = run_experiment(plan, four);
  REQUIRE(a.size() == 6);
  CHECK(summary_text(a) == summary_text(b));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].records.empty());
  }
  CHECK(a[0].seed == 1);
  CHECK(a[2].seed == 3);
  CHECK(a[3].strategy == "SD");
  CHECK(a[3].replication == 0);
}

TEST_CASE("failed replications are reported, not thrown") {
  auto cfg = tiny_highway(DifraStrategy{});
  cfg.vehicle_count = 5000;
  cfg.replications = 1;
  const auto rs = run_experiment({cfg});
  REQUIRE(rs.size() == 1);
  CHECK_FALSE(rs[0].error.empty());
}

TEST_CASE("on_result sees records before they are dropped") {
  auto cfg = tiny_highway(DifraStrategy{});
  cfg.replications = 2;
  std::size_t seen = 0;
  ExperimentOptions opt;
  opt.on_result = [&](const ReplicationResult& r) { seen += r.records.size(); };
  run_experiment({cfg}, opt);
  CHECK(seen == 2 * 60 * 10);
}
