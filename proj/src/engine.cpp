#include "swarmfredy/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "swarmfredy/strategy.hpp"

namespace swarmfredy {

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      mobility_(init_traffic(cfg, seed)),
      radio_rng_(make_stream(seed, "radio")),
      sdidi_rng_(make_stream(seed, "sdidi")) {
  for (auto& v : mutable_fleet()) {
    v.current_br = cfg_.initial_rate;
    v.advertised_dbr = cfg_.initial_rate;
  }
}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<Vehicle> layout)
    : cfg_(cfg),
      static_fleet_(std::move(layout)),
      radio_rng_(make_stream(seed, "radio")),
      sdidi_rng_(make_stream(seed, "sdidi")) {
  for (std::size_t i = 0; i < static_fleet_.size(); ++i) {
    auto& v = static_fleet_[i];
    v.id = static_cast<NodeId>(i);
    v.current_br = cfg_.initial_rate;
    v.advertised_dbr = cfg_.initial_rate;
    v.br_buffer = BRBuffer(cfg_.rate_set.k());
    v.adaptation_count = 0;
  }
}

const std::vector<Vehicle>& Simulation::fleet() const {
  return mobility_ ? mobility_->vehicles : static_fleet_;
}

std::vector<Vehicle>& Simulation::mutable_fleet() {
  return mobility_ ? mobility_->vehicles : static_fleet_;
}

void Simulation::move_vehicle(NodeId id, Vec2 position) {
  if (mobility_) throw std::logic_error("move_vehicle is only available for fixed layouts");
  static_fleet_.at(id).position = position;
}

void Simulation::run_window() {
  auto& fleet = mutable_fleet();
  const double start = window_ * cfg_.window;
  if (mobility_) advance(*mobility_, cfg_.window);
  if (trace_) trace_(start, fleet);

  broadcast_window(fleet, cfg_.radio, cfg_.road_length, {start, cfg_.window}, radio_rng_, queues_);

  const std::size_t n = fleet.size();
  if (previous_br_.empty()) {
    previous_br_.resize(n);
    for (std::size_t i = 0; i < n; ++i) previous_br_[i] = fleet[i].current_br;
  }
  records_.reserve(records_.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = fleet[i];
    const auto& q = queues_[i];
    MetricsRecord rec;
    rec.node_id = v.id;
    rec.window_index = window_;
    rec.eta = channel_occupancy(q, cfg_.channel);
    const auto neighbours = neighbor_rates_view(q);
    if (!neighbours.empty()) rec.sigma = network_balance(v.current_br, neighbours, cfg_.cv_textbook);
    rec.br = v.current_br;
    rec.adapted = window_ > 0 && v.current_br != previous_br_[i];
    rec.overflow = q.overflow(cfg_.channel.max_q);
    records_.push_back(rec);
  }

  // Decisions first, then apply, so no node sees another's new rate.
  const ControllerContext ctx{cfg_.channel, cfg_.rate_set, cfg_.dedup_senders, cfg_.road_length};
  std::vector<WindowDecision> decisions(n);
  for (std::size_t i = 0; i < n; ++i) {
    decisions[i] = decide_window(cfg_.strategy, fleet[i], queues_[i], ctx, sdidi_rng_);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = fleet[i];
    previous_br_[i] = v.current_br;
    if (decisions[i].next_br != v.current_br) ++v.adaptation_count;
    v.current_br = decisions[i].next_br;
    v.advertised_dbr = decisions[i].advertised_dbr;
  }
  ++window_;
}

void Simulation::run(int windows) {
  for (int w = 0; w < windows; ++w) run_window();
}

std::string scenario_label(int vehicles) { return std::to_string(vehicles) + "veh"; }

ReplicationResult run_replication(const ScenarioConfig& cfg, std::uint64_t seed, int replication,
                                  const TraceFn& trace) {
  ReplicationResult res;
  res.scenario = scenario_label(cfg.vehicle_count);
  res.strategy = strategy_label(cfg.strategy);
  res.strategy_spec = format_strategy(cfg.strategy);
  res.vehicles = cfg.vehicle_count;
  res.replication = replication;
  res.seed = seed;
  Simulation sim(cfg, seed);
  if (trace) sim.set_trace(trace);
  sim.run(cfg.window_count());
  res.records = sim.take_records();
  res.summary = aggregate_replication(res.records, cfg.warmup_windows);
  return res;
}

std::vector<ReplicationResult> run_experiment(const std::vector<ScenarioConfig>& cfgs,
                                              const ExperimentOptions& options) {
  struct Job {
    const ScenarioConfig* cfg;
    int replication;
  };
  std::vector<Job> jobs;
  for (const auto& cfg : cfgs) {
    for (int r = 0; r < cfg.replications; ++r) jobs.push_back({&cfg, r});
  }
  std::vector<ReplicationResult> results(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto& job = jobs[j];
      const std::uint64_t seed = job.cfg->base_seed + static_cast<std::uint64_t>(job.replication);
      ReplicationResult res;
      try {
        const TraceFn trace = options.trace_for ? options.trace_for(*job.cfg, job.replication) : TraceFn{};
        res = run_replication(*job.cfg, seed, job.replication, trace);
      } catch (const std::exception& e) {
        res.scenario = scenario_label(job.cfg->vehicle_count);
        res.strategy = strategy_label(job.cfg->strategy);
        res.strategy_spec = format_strategy(job.cfg->strategy);
        res.vehicles = job.cfg->vehicle_count;
        res.replication = job.replication;
        res.seed = seed;
        res.error = e.what();
      }
      if (options.on_result) options.on_result(res);
      if (!options.keep_records) {
        res.records.clear();
        res.records.shrink_to_fit();
      }
      results[j] = std::move(res);
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace swarmfredy
