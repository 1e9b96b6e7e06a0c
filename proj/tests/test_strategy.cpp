#include "doctest.h"

#include <algorithm>
#include <random>

#include "swarmfredy/strategy.hpp"

using namespace swarmfredy;

namespace {

Beacon from(NodeId sender, double x, int dbr) {
  Beacon b;
  b.sender_id = sender;
  b.position = {x, 0.0};
  b.dbr = dbr;
  return b;
}

WindowQueue queue_of_senders(std::size_t senders) {
  WindowQueue q;
  for (std::size_t s = 0; s < senders; ++s) {
    for (int k = 0; k < 1 + static_cast<int>(s % 3); ++k) q.entries.push_back(from(static_cast<NodeId>(s), 10.0, 5));
  }
  return q;
}

BRBuffer buffer_of(const std::vector<std::uint32_t>& counts) {
  BRBuffer b(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) b.add(i, counts[i]);
  return b;
}

// Every rate whose count equals the maximum.
std::vector<int> argmax_set(const std::vector<std::uint32_t>& counts, const BeaconRateSet& rates) {
  const auto top = *std::max_element(counts.begin(), counts.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == top) out.push_back(rates.rates()[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("neighbourhood counts distinct senders") {
  WindowQueue q;
  q.entries = {from(7, 10, 5), from(7, 10, 5), from(9, 30, 4)};
  const auto est = estimate_neighborhood(q, {0.0, 0.0});
  CHECK(est.nn_size == 2);
  REQUIRE(est.observations.size() == 3);
  CHECK(est.observations[2].distance == doctest::Approx(30.0));
  CHECK(est.observations[2].dbr == 4);

  const auto empty = estimate_neighborhood(WindowQueue{}, {0.0, 0.0});
  CHECK(empty.nn_size == 0);
  CHECK(empty.observations.empty());

  CHECK(count_distinct_senders(queue_of_senders(63)) == 63);
}

TEST_CASE("observed distance wraps the ring") {
  WindowQueue q;
  q.entries = {from(1, 1990.0, 5)};
  CHECK(estimate_neighborhood(q, {10.0, 0.0}, 2000.0).observations[0].distance == doctest::Approx(20.0));
}

TEST_CASE("tentative rate") {
  CHECK(compute_tdbr(24.0, 3) == 6);
  CHECK(compute_tdbr(320.0, 0) == 320);
  CHECK(compute_tdbr(320.0, 63) == 5);
  CHECK(compute_tdbr(320.0, 319) == 1);
  CHECK(compute_tdbr(320.0, 400) == 0);
}

TEST_CASE("rate clamp") {
  BeaconRateSet rs;
  CHECK(clamp_dbr(0, rs) == 1);
  CHECK(clamp_dbr(320, rs) == 10);
  CHECK(clamp_dbr(6, rs) == 6);
  BeaconRateSet sparse({2, 4, 8});
  CHECK(clamp_dbr(1, sparse) == 2);
  CHECK(clamp_dbr(7, sparse) == 4);
  CHECK(clamp_dbr(9, sparse) == 8);
}

TEST_CASE("sdidi classes") {
  const SdidiParams p{50.0, 150.0};
  CHECK(sdidi_classify(49.9, p) == SdidiClass::Authority);
  CHECK(sdidi_classify(50.0, p) == SdidiClass::Voter);
  CHECK(sdidi_classify(150.0, p) == SdidiClass::Voter);
  CHECK(sdidi_classify(150.1, p) == SdidiClass::Exile);
  CHECK(sdidi_classify(0.0, {0.0, 50.0}) == SdidiClass::Voter);
  CHECK(sdidi_classify(260.0, {0.0, 250.0}) == SdidiClass::Exile);

  CHECK(sdidi_probability(SdidiClass::Voter, 50.0, p) == 1.0);
  CHECK(sdidi_probability(SdidiClass::Voter, 100.0, p) == 0.5);
  CHECK(sdidi_probability(SdidiClass::Voter, 150.0, p) == 0.0);
  CHECK(sdidi_probability(SdidiClass::Authority, 10.0, p) == 1.0);
  CHECK(sdidi_probability(SdidiClass::Exile, 200.0, p) == 0.0);
}

TEST_CASE("sdidi acceptance") {
  const SdidiParams p{50.0, 150.0};
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(sdidi_accept(SdidiClass::Voter, 150.0, p, rng));
    CHECK(sdidi_accept(SdidiClass::Authority, 20.0, p, rng));
    CHECK_FALSE(sdidi_accept(SdidiClass::Exile, 200.0, p, rng));
  }
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits += sdidi_accept(SdidiClass::Voter, 100.0, p, rng);
  CHECK(std::abs(hits / double(draws) - 0.5) <= 0.01);
}

TEST_CASE("unit_uniform stays in [0,1)") {
  Rng rng(3);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = unit_uniform(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("siec votes") {
  const BeaconRateSet rs;
  const SdidiParams p{100.0, 200.0};
  Rng rng(1);
  BRBuffer b;
  siec_process(b, {1, 10.0, 5}, p, rs, rng);
  CHECK(b.counts()[4] == 1);
  CHECK(b.total() == 1);
  siec_process(b, {2, 250.0, 5}, p, rs, rng);
  CHECK(b.total() == 1);

  BRBuffer c;
  for (int i = 0; i < 10; ++i) siec_process(c, {1, 10.0, 3}, p, rs, rng);
  for (int i = 0; i < 25; ++i) siec_process(c, {2, 10.0, 5}, p, rs, rng);
  CHECK(c.counts() == std::vector<std::uint32_t>{0, 0, 10, 0, 25, 0, 0, 0, 0, 0});
}

TEST_CASE("sqmc own vote") {
  const BeaconRateSet rs;
  const ChannelParams ch;
  BRBuffer b;
  CHECK(sqmc_process(b, WindowQueue{}, ch, rs) == 10);
  CHECK(b.counts()[9] == 1);
  BRBuffer c;
  CHECK(sqmc_process(c, queue_of_senders(63), ch, rs) == 5);
  CHECK(c.counts()[4] == 1);
  CHECK(c.total() == 1);
  BRBuffer d;
  CHECK(sqmc_process(d, queue_of_senders(319), ch, rs) == 1);
}

TEST_CASE("brac picks the mode") {
  const BeaconRateSet rs;
  auto b = buffer_of({0, 0, 5, 7, 9, 10, 6, 5, 5, 0});
  CHECK(brac_decide(b, 10, rs) == 6);
  CHECK(b.empty());

  BRBuffer none;
  CHECK(brac_decide(none, 7, rs) == 7);

  auto tie = buffer_of({0, 0, 0, 7, 0, 7, 0, 0, 0, 0});
  CHECK(brac_decide(tie, 10, rs) == 6);
}

TEST_CASE("brac agrees with a brute-force argmax") {
  const BeaconRateSet rs;
  std::mt19937 gen(77);
  std::uniform_int_distribution<int> count(0, 6);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::uint32_t> counts(10);
    for (auto& c : counts) c = static_cast<std::uint32_t>(count(gen));
    auto b = buffer_of(counts);
    const int got = brac_decide(b, 3, rs);
    if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) {
      CHECK(got == 3);
      continue;
    }
    const auto best = argmax_set(counts, rs);
    CHECK(std::find(best.begin(), best.end(), got) != best.end());
    CHECK(got == best.back());
  }
}

TEST_CASE("difra") {
  const BeaconRateSet rs;
  CHECK(difra_decide(queue_of_senders(3), {30, 0.8}, rs) == 6);
  CHECK(difra_decide(WindowQueue{}, {}, rs) == 10);
  CHECK(difra_decide(queue_of_senders(63), {}, rs) == 5);
}

TEST_CASE("fredy decision combines own and neighbour votes") {
  const BeaconRateSet rs;
  const ChannelParams ch{30, 0.8};
  const ControllerContext ctx{ch, rs};
  Rng rng(1);

  // Three neighbours, each heard 10 times, still requesting 10 Hz.
  WindowQueue q;
  for (NodeId s = 1; s <= 3; ++s) {
    for (int k = 0; k < 10; ++k) q.entries.push_back(from(s, 10.0 * s, 10));
  }
  Vehicle self;
  self.br_buffer = BRBuffer(rs.k());
  auto d = decide_window(FredyStrategy{{0.0, 250.0}}, self, q, ctx, rng);
  CHECK(d.advertised_dbr == 6);
  CHECK(d.next_br == 10);
  CHECK(self.br_buffer.empty());

  // Once they request 6 Hz the node follows.
  for (auto& b : q.entries) b.dbr = 6;
  d = decide_window(FredyStrategy{{0.0, 250.0}}, self, q, ctx, rng);
  CHECK(d.next_br == 6);

  // With every neighbour exiled only the own vote is left.
  for (auto& b : q.entries) b.dbr = 10;
  d = decide_window(FredyStrategy{{0.0, 1e-9}}, self, q, ctx, rng);
  CHECK(d.next_br == 6);
}

TEST_CASE("deduplicated voting counts each sender once") {
  const BeaconRateSet rs;
  const ChannelParams ch{30, 0.8};
  Rng rng(1);
  WindowQueue q;
  for (int k = 0; k < 5; ++k) q.entries.push_back(from(1, 10.0, 10));
  q.entries.push_back(from(2, 10.0, 4));
  q.entries.push_back(from(3, 10.0, 4));
  Vehicle self;
  self.br_buffer = BRBuffer(rs.k());

  const ControllerContext plain{ch, rs, false};
  CHECK(decide_window(FredyStrategy{{0.0, 250.0}}, self, q, plain, rng).next_br == 10);
  const ControllerContext dedup{ch, rs, true};
  CHECK(decide_window(FredyStrategy{{0.0, 250.0}}, self, q, dedup, rng).next_br == 4);
}

TEST_CASE("difra and fixed decisions") {
  const BeaconRateSet rs;
  const ChannelParams ch{30, 0.8};
  const ControllerContext ctx{ch, rs};
  Rng rng(1);
  Vehicle self;
  const auto d = decide_window(DifraStrategy{}, self, queue_of_senders(3), ctx, rng);
  CHECK(d.next_br == 6);
  CHECK(d.advertised_dbr == 6);
  CHECK(decide_window(FixedStrategy{4}, self, queue_of_senders(3), ctx, rng).next_br == 4);
}
