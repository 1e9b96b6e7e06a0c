#include "swarmfredy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace swarmfredy {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string stem_for(const std::string& spec, int vehicles, int replication) {
  std::string s;
  for (char c : spec) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
      s += c;
    } else if (c == '(' || c == ',') {
      s += '_';
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "__r%03d", replication);
  return s + "__" + std::to_string(vehicles) + "veh" + buf;
}

}  // namespace

void write_records_csv(std::ostream& out, int replication, std::span<const MetricsRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << replication << ',' << r.node_id << ',' << r.window_index << ',' << num(r.eta) << ','
        << (r.sigma ? num(*r.sigma) : std::string()) << ',' << r.br << ',' << (r.adapted ? 1 : 0) << ','
        << (r.overflow ? 1 : 0) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const ReplicationResult> results) {
  out << kSummaryHeader << '\n';
  for (const auto& r : results) {
    if (!r.error.empty()) continue;
    out << quoted(r.strategy) << ',' << r.vehicles << ',' << r.replication << ',' << num(r.summary.br.median)
        << ',' << num(r.summary.eta.median) << ',' << num(r.summary.sigma.median) << ','
        << r.summary.adaptations << '\n';
  }
}

void write_trace_header(std::ostream& out) { out << "time,vehicle_id,x,y,lane,speed\n"; }

void write_trace_rows(std::ostream& out, double time, std::span<const Vehicle> vehicles) {
  for (const auto& v : vehicles) {
    out << num(time) << ',' << v.id << ',' << num(v.position.x) << ',' << num(v.position.y) << ',' << v.lane
        << ',' << num(v.speed) << '\n';
  }
}

std::string replication_stem(const ReplicationResult& r) {
  return stem_for(r.strategy_spec, r.vehicles, r.replication);
}

std::string replication_stem(const ScenarioConfig& cfg, int replication) {
  return stem_for(format_strategy(cfg.strategy), cfg.vehicle_count, replication);
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kSummaryHeader)) {
    throw std::runtime_error("summary CSV: unexpected header");
  }
  std::vector<SummaryRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto c = split_csv_line(line);
    if (c.size() != 7) throw std::runtime_error("summary CSV line " + std::to_string(lineno) + ": expected 7 cells");
    try {
      rows.push_back({c[0], std::stoi(c[1]), std::stoi(c[2]), std::stod(c[3]), std::stod(c[4]),
                      c[5].empty() ? std::nan("") : std::stod(c[5]), std::stol(c[6])});
    } catch (const std::logic_error&) {
      throw std::runtime_error("summary CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

Metric parse_metric(const std::string& name) {
  if (name == "br") return Metric::Br;
  if (name == "eta") return Metric::Eta;
  if (name == "sigma") return Metric::Sigma;
  if (name == "adaptations") return Metric::Adaptations;
  throw std::invalid_argument("unknown metric '" + name + "' (br, eta, sigma, adaptations)");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Br:
      return "br";
    case Metric::Eta:
      return "eta";
    case Metric::Sigma:
      return "sigma";
    case Metric::Adaptations:
      return "adaptations";
  }
  return "?";
}

stats::Direction default_direction(Metric m) {
  return m == Metric::Br || m == Metric::Eta ? stats::Direction::HigherIsBetter : stats::Direction::LowerIsBetter;
}

double metric_value(const SummaryRow& row, Metric m) {
  switch (m) {
    case Metric::Br:
      return row.median_br;
    case Metric::Eta:
      return row.median_eta;
    case Metric::Sigma:
      return row.median_sigma;
    case Metric::Adaptations:
      return static_cast<double>(row.adaptations);
  }
  return std::nan("");
}

stats::ResultMatrix build_result_matrix(std::span<const SummaryRow> rows, Metric metric) {
  stats::ResultMatrix m;
  std::vector<int> densities;
  for (const auto& r : rows) {
    if (std::find(m.methods.begin(), m.methods.end(), r.strategy) == m.methods.end()) m.methods.push_back(r.strategy);
    if (std::find(densities.begin(), densities.end(), r.vehicles) == densities.end()) densities.push_back(r.vehicles);
  }
  std::sort(densities.begin(), densities.end());
  std::map<std::pair<int, std::string>, std::vector<double>> cells;
  for (const auto& r : rows) cells[{r.vehicles, r.strategy}].push_back(metric_value(r, metric));
  for (int d : densities) {
    m.blocks.push_back(std::to_string(d) + "veh");
    std::vector<double> row;
    for (const auto& method : m.methods) {
      const auto it = cells.find({d, method});
      row.push_back(it == cells.end() ? std::nan("") : median(it->second));
    }
    m.values.push_back(std::move(row));
  }
  return m;
}

std::vector<double> method_samples(std::span<const SummaryRow> rows, const std::string& method, Metric metric) {
  std::vector<const SummaryRow*> picked;
  for (const auto& r : rows) {
    if (r.strategy == method) picked.push_back(&r);
  }
  std::sort(picked.begin(), picked.end(), [](const SummaryRow* a, const SummaryRow* b) {
    return std::pair(a->vehicles, a->replication) < std::pair(b->vehicles, b->replication);
  });
  std::vector<double> out;
  for (const auto* r : picked) out.push_back(metric_value(*r, metric));
  return out;
}

void write_ranking_table(std::ostream& out, const stats::FriedmanResult& res, Metric metric) {
  char buf[128];
  out << "Aligned Friedman ranking (" << metric_name(metric) << ")\n";
  out << "Congestion control method   Ranking position   Rank value\n";
  for (const auto& e : res.ranking) {
    std::snprintf(buf, sizeof buf, "%-27s %16d %12.3f\n", e.method.c_str(), e.position, e.rank_value);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "statistic = %.6f, p-value = %.3g\n", res.statistic, res.p_value);
  out << buf;
}

void write_ranking_csv(std::ostream& out, const stats::FriedmanResult& res) {
  out << "method,position,rank_value\n";
  for (const auto& e : res.ranking) out << quoted(e.method) << ',' << e.position << ',' << num(e.rank_value) << '\n';
}

std::string library_version() { return "1.0.0"; }

std::string manifest_json(const ExperimentSpec& spec, std::span<const ScenarioConfig> plan) {
  nlohmann::ordered_json j;
  j["tool"] = "swarmfredy";
  j["version"] = library_version();
  j["config"] = serialize_config(spec);
  auto& runs = j["runs"];
  runs = nlohmann::ordered_json::array();
  for (const auto& cfg : plan) {
    nlohmann::ordered_json r;
    r["strategy"] = format_strategy(cfg.strategy);
    r["vehicles"] = cfg.vehicle_count;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < cfg.replications; ++i) seeds.push_back(cfg.base_seed + static_cast<std::uint64_t>(i));
    r["seeds"] = seeds;
    runs.push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::vector<ReplicationResult> simulate_to_directory(const ExperimentSpec& spec, const std::filesystem::path& dir,
                                                     const RunDirectoryOptions& options) {
  namespace fs = std::filesystem;
  const auto plan = expand_scenarios(spec);
  for (const auto& cfg : plan) require_valid(cfg);
  fs::create_directories(dir / "records");
  if (options.trace) fs::create_directories(dir / "trace");
  write_file(dir / "manifest.json", manifest_json(spec, plan));

  ExperimentOptions opt;
  opt.workers = options.workers;
  // Each replication owns its own files, so workers never share a stream.
  opt.on_result = [&](const ReplicationResult& r) {
    if (!r.error.empty()) return;
    std::ostringstream out;
    write_records_csv(out, r.replication, r.records);
    write_file(dir / "records" / (replication_stem(r) + ".csv"), out.str());
  };
  if (options.trace) {
    opt.trace_for = [&](const ScenarioConfig& cfg, int replication) -> TraceFn {
      auto file = std::make_shared<std::ofstream>(dir / "trace" / (replication_stem(cfg, replication) + ".csv"),
                                                  std::ios::binary);
      write_trace_header(*file);
      return [file](double t, std::span<const Vehicle> vs) { write_trace_rows(*file, t, vs); };
    };
  }
  auto results = run_experiment(plan, opt);

  std::ostringstream summary;
  write_summary_csv(summary, results);
  write_file(dir / "summary.csv", summary.str());
  return results;
}

}  // namespace swarmfredy
