#pragma once

// CSV and manifest output.
//
//   records:  replication,node,window,eta,sigma,br,adapted,overflow
//   summary:  strategy,vehicles,replication,median_br,median_eta,median_sigma,adaptations

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swarmfredy/config_io.hpp"
#include "swarmfredy/engine.hpp"
#include "swarmfredy/stats.hpp"

namespace swarmfredy {

inline constexpr const char* kRecordsHeader = "replication,node,window,eta,sigma,br,adapted,overflow";
inline constexpr const char* kSummaryHeader =
    "strategy,vehicles,replication,median_br,median_eta,median_sigma,adaptations";

void write_records_csv(std::ostream& out, int replication, std::span<const MetricsRecord> records);
void write_summary_csv(std::ostream& out, std::span<const ReplicationResult> results);
void write_trace_header(std::ostream& out);
void write_trace_rows(std::ostream& out, double time, std::span<const Vehicle> vehicles);

/// Stable file stem for one replication, e.g. "fredy_0_50__200veh__r003".
std::string replication_stem(const ReplicationResult& result);
std::string replication_stem(const ScenarioConfig& cfg, int replication);

struct SummaryRow {
  std::string strategy;
  int vehicles = 0;
  int replication = 0;
  double median_br = 0.0;
  double median_eta = 0.0;
  double median_sigma = 0.0;
  long adaptations = 0;
};

std::vector<SummaryRow> read_summary_csv(std::istream& in);

enum class Metric { Br, Eta, Sigma, Adaptations };
Metric parse_metric(const std::string& name);
std::string metric_name(Metric m);
stats::Direction default_direction(Metric m);
double metric_value(const SummaryRow& row, Metric m);

/// Methods in order of first appearance, blocks sorted by vehicle count,
/// cells are medians over replications.
stats::ResultMatrix build_result_matrix(std::span<const SummaryRow> rows, Metric metric);

/// Per-replication values of one method, ordered by (vehicles, replication).
std::vector<double> method_samples(std::span<const SummaryRow> rows, const std::string& method, Metric metric);

void write_ranking_table(std::ostream& out, const stats::FriedmanResult& result, Metric metric);
void write_ranking_csv(std::ostream& out, const stats::FriedmanResult& result);

/// Config snapshot, seeds and version; contains nothing run-dependent.
std::string manifest_json(const ExperimentSpec& spec, std::span<const ScenarioConfig> plan);

std::string library_version();

struct RunDirectoryOptions {
  int workers = 1;
  bool trace = false;
};

/// Runs every scenario of `spec` and writes into `dir`:
///   manifest.json, summary.csv, records/<stem>.csv and, with trace,
///   trace/<stem>.csv. File contents do not depend on the worker count.
std::vector<ReplicationResult> simulate_to_directory(const ExperimentSpec& spec, const std::filesystem::path& dir,
                                                     const RunDirectoryOptions& options = {});

}  // namespace swarmfredy
