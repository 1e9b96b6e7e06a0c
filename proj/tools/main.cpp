// swarmfredy: run beacon-rate experiments and rank the results.
//
//   swarmfredy simulate --config FILE [--profile desk|paper] [--seed N] [--workers N] [--out DIR] [--trace]
//   swarmfredy rank --metric br|eta|sigma|adaptations [--direction higher|lower] --in DIR
//   swarmfredy validate --config FILE

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "swarmfredy/config_io.hpp"
#include "swarmfredy/report.hpp"

using namespace swarmfredy;
namespace fs = std::filesystem;

namespace {

void print_invalid(const InvalidConfig& e, const std::string& where) {
  for (const auto& err : e.errors()) std::cerr << where << ": " << err.field << ": " << err.reason << '\n';
}

int cmd_validate(const std::string& path) {
  const auto spec = load_config_file(path);
  int bad = 0;
  for (const auto& cfg : expand_scenarios(spec)) {
    const auto errs = validate_config(cfg);
    for (const auto& e : errs) {
      std::cerr << format_strategy(cfg.strategy) << " @ " << cfg.vehicle_count << " vehicles: " << e.field << ": "
                << e.reason << '\n';
    }
    bad += !errs.empty();
  }
  if (bad) return 1;
  std::cout << path << ": ok (" << expand_scenarios(spec).size() << " scenario(s))\n";
  return 0;
}

int cmd_simulate(const std::string& path, const std::optional<std::string>& profile, std::optional<std::uint64_t> seed,
                 int workers, const std::string& out, bool trace) {
  auto spec = load_config_file(path);
  if (profile) apply_profile(spec, parse_profile(*profile));
  if (seed) spec.base.base_seed = *seed;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const auto plan = expand_scenarios(spec);
  std::size_t total = 0;
  for (const auto& c : plan) total += static_cast<std::size_t>(c.replications);
  std::cerr << "running " << plan.size() << " scenario(s), " << total << " replication(s) on " << workers
            << " worker(s)\n";

  const auto results = simulate_to_directory(spec, out, {workers, trace});
  int failed = 0;
  for (const auto& r : results) {
    if (r.error.empty()) continue;
    ++failed;
    std::cerr << "replication " << replication_stem(r) << " failed: " << r.error << '\n';
  }
  std::cerr << "wrote " << (fs::path(out) / "summary.csv").string() << '\n';
  return failed ? 2 : 0;
}

int cmd_rank(const std::string& metric_name_arg, const std::optional<std::string>& direction_arg,
             const std::string& in_dir) {
  const Metric metric = parse_metric(metric_name_arg);
  stats::Direction direction = default_direction(metric);
  if (direction_arg) {
    if (*direction_arg == "higher") {
      direction = stats::Direction::HigherIsBetter;
    } else if (*direction_arg == "lower") {
      direction = stats::Direction::LowerIsBetter;
    } else {
      throw std::invalid_argument("--direction must be higher or lower");
    }
  }

  std::ifstream in(fs::path(in_dir) / "summary.csv");
  if (!in) throw std::runtime_error("no summary.csv in " + in_dir);
  const auto rows = read_summary_csv(in);
  const auto matrix = build_result_matrix(rows, metric);
  const auto result = stats::aligned_friedman(matrix, direction);
  write_ranking_table(std::cout, result, metric);

  std::cout << "\nKolmogorov-Smirnov normality (per-replication values)\n";
  for (const auto& method : matrix.methods) {
    const auto sample = method_samples(rows, method, metric);
    try {
      const auto ks = stats::ks_normality(sample);
      std::printf("  %-14s D = %.4f  p = %.3g\n", method.c_str(), ks.statistic, ks.p_value);
    } catch (const std::exception& e) {
      std::printf("  %-14s %s\n", method.c_str(), e.what());
    }
  }

  if (result.ranking.size() >= 2) {
    const auto& best = result.ranking[0].method;
    const auto& second = result.ranking[1].method;
    const auto a = method_samples(rows, best, metric);
    const auto b = method_samples(rows, second, metric);
    std::cout << "\nWilcoxon signed-rank, " << best << " vs " << second << '\n';
    try {
      const auto w = stats::wilcoxon_signed_rank(a, b);
      std::printf("  n = %zu  W+ = %.1f  W- = %.1f  p(greater) = %.3g  p(less) = %.3g  p(two-sided) = %.3g%s\n", w.n,
                  w.w_plus, w.w_minus, w.p_greater, w.p_less, w.p_two_sided, w.exact ? "  (exact)" : "");
    } catch (const std::exception& e) {
      std::printf("  %s\n", e.what());
    }
  }

  const auto csv_path = fs::path(in_dir) / ("ranking_" + metric_name(metric) + ".csv");
  std::ofstream csv(csv_path);
  write_ranking_csv(csv, result);
  std::cerr << "wrote " << csv_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beacon-rate congestion control simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  std::string config_path, out_dir = "results", in_dir, metric, profile_name, direction;
  std::uint64_t seed = 0;
  int workers = 0;
  bool trace = false;

  auto* simulate = app.add_subcommand("simulate", "Run an experiment and write CSVs");
  simulate->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  auto* profile_opt = simulate->add_option("--profile", profile_name, "Scale preset")->check(CLI::IsMember({"desk", "paper"}));
  auto* seed_opt = simulate->add_option("--seed", seed, "Base seed; replication i uses seed + i");
  simulate->add_option("--workers", workers, "Concurrent replications (0: all cores)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
  simulate->add_flag("--trace", trace, "Also write vehicle positions per window");

  auto* rank = app.add_subcommand("rank", "Aligned Friedman ranking of a finished run");
  rank->add_option("--metric", metric, "Metric to rank")
      ->required()
      ->check(CLI::IsMember({"br", "eta", "sigma", "adaptations"}));
  auto* dir_opt = rank->add_option("--direction", direction, "higher or lower is better (default per metric)")
                      ->check(CLI::IsMember({"higher", "lower"}));
  rank->add_option("--in", in_dir, "Directory written by simulate")->required()->check(CLI::ExistingDirectory);

  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      return cmd_simulate(config_path, *profile_opt ? std::optional(profile_name) : std::nullopt,
                          *seed_opt ? std::optional(seed) : std::nullopt, workers, out_dir, trace);
    }
    if (*rank) return cmd_rank(metric, *dir_opt ? std::optional(direction) : std::nullopt, in_dir);
    return cmd_validate(config_path);
  } catch (const InvalidConfig& e) {
    print_invalid(e, config_path);
  } catch (const ConfigParseError& e) {
    for (const auto& p : e.problems()) std::cerr << config_path << ": " << p << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
