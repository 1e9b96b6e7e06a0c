#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmfredy/config_io.hpp"
#include "swarmfredy/engine.hpp"
#include "swarmfredy/metrics.hpp"
#include "swarmfredy/report.hpp"
#include "swarmfredy/stats.hpp"
#include "swarmfredy/strategy.hpp"

namespace py = pybind11;
using namespace swarmfredy;

namespace {

BeaconRateSet rate_set(const std::optional<std::vector<int>>& rates) {
  return rates ? BeaconRateSet(*rates) : BeaconRateSet{};
}

py::dict summary_dict(const MetricSummary& s) {
  py::dict d;
  d["count"] = s.count;
  d["mean"] = s.mean;
  d["median"] = s.median;
  d["q1"] = s.q1;
  d["q3"] = s.q3;
  return d;
}

stats::Direction direction_of(const std::string& name) {
  if (name == "higher") return stats::Direction::HigherIsBetter;
  if (name == "lower") return stats::Direction::LowerIsBetter;
  throw std::invalid_argument("direction must be 'higher' or 'lower'");
}

ScenarioConfig scenario_from(const std::string& text) {
  const auto spec = parse_config(text);
  return require_valid(spec.base);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Beacon-rate congestion control simulator";
  m.attr("__version__") = library_version();

  py::register_exception<ConfigParseError>(m, "ConfigParseError", PyExc_ValueError);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<UndefinedBalance>(m, "UndefinedBalance", PyExc_ValueError);
  py::register_exception<stats::AllTies>(m, "AllTies", PyExc_ValueError);
  py::register_exception<stats::DegenerateSample>(m, "DegenerateSample", PyExc_ValueError);

  m.def("compute_tdbr", &compute_tdbr, py::arg("omega"), py::arg("nn_size"));
  m.def(
      "clamp_dbr", [](int tdbr, std::optional<std::vector<int>> rates) { return clamp_dbr(tdbr, rate_set(rates)); },
      py::arg("tdbr"), py::arg("rates") = py::none());
  m.def(
      "sdidi_classify",
      [](double distance, double d1, double d2) {
        switch (sdidi_classify(distance, {d1, d2})) {
          case SdidiClass::Authority:
            return "authority";
          case SdidiClass::Voter:
            return "voter";
          case SdidiClass::Exile:
            return "exile";
        }
        return "";
      },
      py::arg("distance"), py::arg("d1"), py::arg("d2"));
  m.def(
      "sdidi_probability",
      [](double distance, double d1, double d2) {
        const SdidiParams p{d1, d2};
        return sdidi_probability(sdidi_classify(distance, p), distance, p);
      },
      py::arg("distance"), py::arg("d1"), py::arg("d2"));
  m.def(
      "channel_occupancy",
      [](std::size_t received, int own, int max_q) { return channel_occupancy(received, own, max_q); },
      py::arg("received"), py::arg("own"), py::arg("max_q") = 400);
  m.def(
      "network_balance",
      [](double own, const std::vector<double>& neighbours, bool textbook) {
        return network_balance(own, neighbours, textbook);
      },
      py::arg("own_br"), py::arg("neighbor_brs"), py::arg("textbook") = false);
  m.def(
      "brac_decide",
      [](const std::vector<std::uint32_t>& counts, int current_br, std::optional<std::vector<int>> rates) {
        const auto rs = rate_set(rates);
        if (counts.size() != rs.k()) throw std::invalid_argument("one count per rate required");
        BRBuffer b(rs.k());
        for (std::size_t i = 0; i < counts.size(); ++i) b.add(i, counts[i]);
        return brac_decide(b, current_br, rs);
      },
      py::arg("counts"), py::arg("current_br"), py::arg("rates") = py::none());

  m.def(
      "aligned_friedman",
      [](std::vector<std::string> methods, std::vector<std::string> blocks, std::vector<std::vector<double>> values,
         const std::string& direction) {
        const auto r = stats::aligned_friedman({std::move(methods), std::move(blocks), std::move(values)},
                                               direction_of(direction));
        py::list ranking;
        for (const auto& e : r.ranking) ranking.append(py::make_tuple(e.method, e.position, e.rank_value));
        py::dict d;
        d["ranking"] = ranking;
        d["rank_sums"] = r.rank_sums;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        return d;
      },
      py::arg("methods"), py::arg("blocks"), py::arg("values"), py::arg("direction") = "higher");
  m.def(
      "wilcoxon_signed_rank",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto w = stats::wilcoxon_signed_rank(a, b);
        py::dict d;
        d["n"] = w.n;
        d["w_plus"] = w.w_plus;
        d["w_minus"] = w.w_minus;
        d["p_greater"] = w.p_greater;
        d["p_less"] = w.p_less;
        d["p_two_sided"] = w.p_two_sided;
        d["exact"] = w.exact;
        return d;
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "ks_normality",
      [](const std::vector<double>& sample) {
        const auto r = stats::ks_normality(sample);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("sample"));

  m.def("config_keys", &config_keys);
  m.def(
      "normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
      py::arg("text"), "Parses config text and returns its canonical form.");
  m.def(
      "validate_config",
      [](const std::string& text) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& cfg : expand_scenarios(parse_config(text))) {
          for (const auto& e : swarmfredy::validate_config(cfg)) out.emplace_back(e.field, e.reason);
        }
        return out;
      },
      py::arg("text"), "Returns (field, reason) pairs; empty when valid.");

  m.def(
      "run_replication",
      [](const std::string& text, std::uint64_t seed, bool records) {
        const auto cfg = scenario_from(text);
        ReplicationResult r;
        {
          py::gil_scoped_release release;
          r = swarmfredy::run_replication(cfg, seed);
        }
        py::dict d;
        d["scenario"] = r.scenario;
        d["strategy"] = r.strategy;
        d["seed"] = r.seed;
        d["br"] = summary_dict(r.summary.br);
        d["eta"] = summary_dict(r.summary.eta);
        d["sigma"] = summary_dict(r.summary.sigma);
        d["adaptations"] = r.summary.adaptations;
        d["overflow_events"] = r.summary.overflow_events;
        d["node_windows"] = r.summary.node_windows;
        if (records) {
          py::list rows;
          for (const auto& x : r.records) {
            rows.append(py::make_tuple(x.node_id, x.window_index, x.eta,
                                       x.sigma ? py::cast(*x.sigma) : py::object(py::none()), x.br, x.adapted,
                                       x.overflow));
          }
          d["records"] = rows;
        }
        return d;
      },
      py::arg("config"), py::arg("seed") = 1, py::arg("records") = false,
      "Runs one replication of the scenario described by config text.\n"
      "Records are (node, window, eta, sigma, br, adapted, overflow) tuples.");
  m.def(
      "simulate",
      [](const std::string& text, const std::string& out_dir, int workers, bool trace) {
        const auto spec = parse_config(text);
        std::size_t failed = 0;
        {
          py::gil_scoped_release release;
          for (const auto& r : simulate_to_directory(spec, out_dir, {workers, trace})) failed += !r.error.empty();
        }
        return failed;
      },
      py::arg("config"), py::arg("out_dir"), py::arg("workers") = 1, py::arg("trace") = false,
      "Runs the whole experiment and writes CSVs and the manifest; returns the number of failed replications.");
}
