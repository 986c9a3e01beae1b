#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "linewalker/drivers.hpp"
#include "linewalker/grid.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

using json = nlohmann::ordered_json;

/// Everything one run writes to disk: the configuration echo, the segment,
/// the evaluation log with grid coordinates, the incumbent curve, and the
/// summary metrics when the objective has a known optimum.
struct TraceArtifact {
  std::string algorithm;      // "full" | "pure" | "hunter"
  std::string objective_kind; // "benchmark" | "oracle"
  std::string objective_name; // function name or oracle command line
  std::vector<double> segment_from;
  std::vector<double> segment_to;
  RunConfig config;

  int iterations = 0;
  struct Row {
    GridIndex index = 0;
    int iteration = 0;
    std::string reason;
    GridIndex candidate = 0;
    double t = 0.0;
    std::vector<double> x;
    double f = 0.0;

    friend bool operator==(const Row&, const Row&) = default;
  };
  std::vector<Row> evaluations;
  std::vector<IncumbentRecord> incumbents;
  GridIndex best_index = 0;
  double best_value = 0.0;
  std::optional<double> f_star;
  std::optional<bool> solved;
  std::optional<double> tase;
  std::optional<std::string> error;

  friend bool operator==(const TraceArtifact&, const TraceArtifact&) = default;
};

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.n_points == b.n_points && a.e_max_total == b.e_max_total &&
         a.e_max_itr == b.e_max_itr && a.alpha == b.alpha && a.mu == b.mu &&
         a.e_min == b.e_min &&
         a.initial_sample_count == b.initial_sample_count &&
         a.theta == b.theta && a.nu_min == b.nu_min && a.nu_max == b.nu_max &&
         a.tenure_init == b.tenure_init &&
         a.record_snapshots == b.record_snapshots;
}

inline json config_to_json(const RunConfig& c) {
  return json{{"n_points", c.n_points},
              {"e_max_total", c.e_max_total},
              {"e_max_itr", c.e_max_itr},
              {"alpha", c.alpha},
              {"mu", c.mu},
              {"e_min", c.e_min},
              {"initial_sample_count", c.initial_sample_count},
              {"theta", c.theta},
              {"nu_min", c.nu_min},
              {"nu_max", c.nu_max},
              {"tenure_init", c.tenure_init},
              {"record_snapshots", c.record_snapshots}};
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.n_points = j.at("n_points").get<int>();
  c.e_max_total = j.at("e_max_total").get<int>();
  c.e_max_itr = j.at("e_max_itr").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.mu = j.at("mu").get<double>();
  c.e_min = j.at("e_min").get<double>();
  c.initial_sample_count = j.at("initial_sample_count").get<int>();
  c.theta = j.at("theta").get<double>();
  c.nu_min = j.at("nu_min").get<double>();
  c.nu_max = j.at("nu_max").get<double>();
  c.tenure_init = j.at("tenure_init").get<int>();
  c.record_snapshots = j.at("record_snapshots").get<bool>();
  return c;
}

/// Assemble the artifact for a finished (or partially finished) run.
inline TraceArtifact make_trace_artifact(
    const std::string& algorithm, const std::string& objective_kind,
    const std::string& objective_name, const Grid<double>& grid,
    const RunConfig& config, const RunTrace& trace,
    std::optional<double> f_star = std::nullopt,
    std::optional<bool> solved = std::nullopt,
    std::optional<double> tase_value = std::nullopt,
    std::optional<std::string> error = std::nullopt) {
  TraceArtifact a;
  a.algorithm = algorithm;
  a.objective_kind = objective_kind;
  a.objective_name = objective_name;
  a.segment_from.assign(grid.start().data(),
                        grid.start().data() + grid.start().size());
  a.segment_to.assign(grid.end().data(), grid.end().data() + grid.end().size());
  a.config = config;
  a.iterations = trace.iterations;
  for (const Evaluation& e : trace.evaluations) {
    TraceArtifact::Row row;
    row.index = e.index;
    row.iteration = e.iteration;
    row.reason = reason_name(e.reason);
    row.candidate = e.candidate;
    row.t = grid.param(e.index);
    const Eigen::VectorXd p = grid.point(e.index);
    row.x.assign(p.data(), p.data() + p.size());
    row.f = e.value;
    a.evaluations.push_back(std::move(row));
  }
  a.incumbents = trace.incumbents;
  a.best_index = trace.best_index;
  a.best_value = trace.best_value;
  a.f_star = f_star;
  a.solved = solved;
  a.tase = tase_value;
  a.error = std::move(error);
  return a;
}

inline json to_json(const TraceArtifact& a) {
  json evals = json::array();
  for (const auto& r : a.evaluations) {
    evals.push_back(json{{"index", r.index},
                         {"iteration", r.iteration},
                         {"reason", r.reason},
                         {"candidate", r.candidate},
                         {"t", r.t},
                         {"x", r.x},
                         {"f", r.f}});
  }
  json incumbents = json::array();
  for (const auto& r : a.incumbents) {
    incumbents.push_back(json{{"evals", r.eval_count}, {"best", r.best_value}});
  }
  json j{{"schema", "linewalker-trace-v1"},
         {"algorithm", a.algorithm},
         {"objective", json{{"kind", a.objective_kind}, {"name", a.objective_name}}},
         {"segment", json{{"from", a.segment_from}, {"to", a.segment_to}}},
         {"config", config_to_json(a.config)},
         {"iterations", a.iterations},
         {"evaluations", evals},
         {"incumbents", incumbents},
         {"best", json{{"index", a.best_index}, {"f", a.best_value}}}};
  j["f_star"] = a.f_star ? json(*a.f_star) : json(nullptr);
  j["solved"] = a.solved ? json(*a.solved) : json(nullptr);
  j["tase"] = a.tase ? json(*a.tase) : json(nullptr);
  j["error"] = a.error ? json(*a.error) : json(nullptr);
  return j;
}

inline TraceArtifact trace_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != "linewalker-trace-v1") {
    throw std::invalid_argument("trace_from_json: unknown schema");
  }
  TraceArtifact a;
  a.algorithm = j.at("algorithm").get<std::string>();
  a.objective_kind = j.at("objective").at("kind").get<std::string>();
  a.objective_name = j.at("objective").at("name").get<std::string>();
  a.segment_from = j.at("segment").at("from").get<std::vector<double>>();
  a.segment_to = j.at("segment").at("to").get<std::vector<double>>();
  a.config = config_from_json(j.at("config"));
  a.iterations = j.at("iterations").get<int>();
  for (const json& e : j.at("evaluations")) {
    TraceArtifact::Row row;
    row.index = e.at("index").get<GridIndex>();
    row.iteration = e.at("iteration").get<int>();
    row.reason = e.at("reason").get<std::string>();
    row.candidate = e.at("candidate").get<GridIndex>();
    row.t = e.at("t").get<double>();
    row.x = e.at("x").get<std::vector<double>>();
    row.f = e.at("f").get<double>();
    a.evaluations.push_back(std::move(row));
  }
  for (const json& r : j.at("incumbents")) {
    a.incumbents.push_back(
        {r.at("evals").get<int>(), r.at("best").get<double>()});
  }
  a.best_index = j.at("best").at("index").get<GridIndex>();
  a.best_value = j.at("best").at("f").get<double>();
  if (!j.at("f_star").is_null()) a.f_star = j.at("f_star").get<double>();
  if (!j.at("solved").is_null()) a.solved = j.at("solved").get<bool>();
  if (!j.at("tase").is_null()) a.tase = j.at("tase").get<double>();
  if (!j.at("error").is_null()) a.error = j.at("error").get<std::string>();
  return a;
}

inline void write_trace(const std::filesystem::path& path,
                        const TraceArtifact& artifact) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(artifact).dump(2) << '\n';
}

inline TraceArtifact load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  in >> j;
  return trace_from_json(j);
}

/// Fit table: one row per grid index with the surrogate value, the truth
/// (NaN when unknown), and the sampled flag. Directly plottable.
struct FitTable {
  std::string config_echo;  // JSON string embedded in the header comment
  struct Row {
    GridIndex index = 0;
    double t = 0.0;
    double f_hat = 0.0;
    double f_true = 0.0;  // NaN when unknown
    bool sampled = false;
  };
  std::vector<Row> rows;
};

inline bool operator==(const FitTable::Row& a, const FitTable::Row& b) {
  const bool truth_equal =
      (std::isnan(a.f_true) && std::isnan(b.f_true)) || a.f_true == b.f_true;
  return a.index == b.index && a.t == b.t && a.f_hat == b.f_hat &&
         truth_equal && a.sampled == b.sampled;
}

inline bool operator==(const FitTable& a, const FitTable& b) {
  return a.config_echo == b.config_echo && a.rows == b.rows;
}

namespace io_detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw std::invalid_argument("bad numeric field: \"" + s + "\"");
  }
  return v;
}

}  // namespace io_detail

inline FitTable make_fit_table(
    const Grid<double>& grid, const Fit<double>& fit,
    const SmoothingSystem<double>& system,
    const std::function<double(double)>& truth,  // may be empty
    const std::string& config_echo) {
  FitTable table;
  table.config_echo = config_echo;
  table.rows.reserve(static_cast<std::size_t>(grid.size()));
  for (GridIndex i = 1; i <= grid.size(); ++i) {
    FitTable::Row row;
    row.index = i;
    row.t = grid.param(i);
    row.f_hat = fit[i];
    row.sampled = system.sampled(i);
    if (truth) {
      row.f_true = truth(row.t);
    } else if (row.sampled) {
      row.f_true = system.value(i);
    } else {
      row.f_true = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(row);
  }
  return table;
}

inline void write_fit_csv(const std::filesystem::path& path,
                          const FitTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# linewalker-fit-v1 " << table.config_echo << '\n';
  out << "index,t,f_hat,f_true,sampled\n";
  for (const auto& r : table.rows) {
    out << r.index << ',' << io_detail::format_double(r.t) << ','
        << io_detail::format_double(r.f_hat) << ','
        << io_detail::format_double(r.f_true) << ',' << (r.sampled ? 1 : 0)
        << '\n';
  }
}

inline FitTable load_fit_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  FitTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# linewalker-fit-v1", 0) != 0) {
    throw std::invalid_argument("not a linewalker fit file: " + path.string());
  }
  table.config_echo = line.size() > 20 ? line.substr(20) : std::string();
  if (!std::getline(in, line) || line != "index,t,f_hat,f_true,sampled") {
    throw std::invalid_argument("bad fit header in " + path.string());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    FitTable::Row row;
    std::getline(ss, field, ',');
    row.index = static_cast<GridIndex>(std::stoll(field));
    std::getline(ss, field, ',');
    row.t = io_detail::parse_double(field);
    std::getline(ss, field, ',');
    row.f_hat = io_detail::parse_double(field);
    std::getline(ss, field, ',');
    row.f_true = io_detail::parse_double(field);
    std::getline(ss, field, ',');
    row.sampled = field == "1";
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace linewalker
