// Command-line harness: run one (algorithm, objective, budget) instance or
// sweep the whole benchmark suite, writing trace/fit artifacts and metric
// tables. See README.md for the file formats.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linewalker/drivers.hpp"
#include "linewalker/metrics.hpp"
#include "linewalker/objectives.hpp"
#include "linewalker/oracle.hpp"
#include "linewalker/trace_io.hpp"

namespace fs = std::filesystem;
using namespace linewalker;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInstance = 2;

struct CommonOpts {
  std::string algo = "full";
  std::string fn;
  std::string oracle_cmd;
  int dim = 1;
  std::string from_csv;
  std::string to_csv;
  int budget = 50;
  int n_points = 0;  // 0: per-function default
  double alpha = 0.0;
  double mu = 0.01;
  double emin = 1e-3;
  double theta = 0.01;
  bool snapshots = false;
  std::string out_dir = "out";
  bool seedless = false;
};

std::vector<double> parse_csv_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

RunConfig build_config(const CommonOpts& opt, GridIndex n_points) {
  RunConfig cfg;
  cfg.n_points = static_cast<int>(n_points);
  cfg.e_max_total = opt.budget;
  cfg.alpha = opt.alpha;
  cfg.mu = opt.mu;
  cfg.e_min = opt.emin;
  cfg.theta = opt.theta;
  cfg.record_snapshots = opt.snapshots;
  return cfg;
}

/// Sampled flag as of the moment a snapshot fit was computed.
bool sampled_before_iteration(const RunTrace& trace, GridIndex index,
                              int iteration) {
  for (const Evaluation& e : trace.evaluations) {
    if (e.index == index && e.iteration < iteration) return true;
  }
  return false;
}

FitTable snapshot_table(const Grid<double>& grid, const Fit<double>& fit,
                        const RunTrace& trace,
                        const std::function<double(GridIndex)>& truth,
                        const std::string& echo) {
  FitTable table;
  table.config_echo = echo;
  for (GridIndex i = 1; i <= grid.size(); ++i) {
    FitTable::Row row;
    row.index = i;
    row.t = grid.param(i);
    row.f_hat = fit[i];
    row.sampled = sampled_before_iteration(trace, i, fit.iteration());
    row.f_true = truth ? truth(i) : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  return table;
}

FitTable final_table(const Grid<double>& grid, const Fit<double>& fit,
                     const RunTrace& trace,
                     const std::function<double(GridIndex)>& truth,
                     const std::string& echo) {
  FitTable table;
  table.config_echo = echo;
  for (GridIndex i = 1; i <= grid.size(); ++i) {
    FitTable::Row row;
    row.index = i;
    row.t = grid.param(i);
    row.f_hat = fit[i];
    row.sampled = false;
    for (const Evaluation& e : trace.evaluations) {
      if (e.index == i) {
        row.sampled = true;
        break;
      }
    }
    if (truth) {
      row.f_true = truth(i);
    } else {
      row.f_true = std::numeric_limits<double>::quiet_NaN();
      for (const Evaluation& e : trace.evaluations) {
        if (e.index == i) {
          row.f_true = e.value;
          break;
        }
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

struct InstanceResult {
  RunTrace trace;
  std::optional<bool> solved;
  std::optional<double> tase_value;
  std::optional<std::string> error;
};

/// Reference fit from the 11 uniform initial samples, used as the TASE
/// denominator.
Fit<double> reference_fit(const BenchmarkFunction& fn, const Grid<double>& grid,
                          const RunConfig& cfg) {
  SmoothingSystem<double> system(grid.size(), cfg.alpha, cfg.mu);
  for (GridIndex i :
       initial_sample_indices(grid.size(), cfg.initial_sample_count)) {
    system.add_sample(i, fn.point_fn(grid.point(i)));
  }
  return fit_surrogate(system);
}

Vector<double> truth_vector(const BenchmarkFunction& fn,
                            const Grid<double>& grid) {
  Vector<double> t(grid.size());
  for (GridIndex i = 1; i <= grid.size(); ++i) {
    t[i - 1] = fn.point_fn(grid.point(i));
  }
  return t;
}

InstanceResult run_instance(Algorithm algo, const Objective& objective,
                            const Grid<double>& grid, const RunConfig& cfg,
                            const BenchmarkFunction* fn) {
  InstanceResult result;
  try {
    result.trace = run_algorithm(algo, objective, grid, cfg);
  } catch (const EvaluationError& e) {
    result.trace = e.partial();
    result.error = e.what();
    return result;
  }
  if (fn != nullptr) {
    result.solved = is_solved(result.trace, *fn);
    const Fit<double> ref = reference_fit(*fn, grid, cfg);
    result.tase_value = tase(result.trace.final_fit, ref, truth_vector(*fn, grid));
  }
  return result;
}

void write_instance_artifacts(const fs::path& dir, const std::string& stem,
                              const std::string& algo_name,
                              const std::string& kind, const std::string& name,
                              const Grid<double>& grid, const RunConfig& cfg,
                              const InstanceResult& res,
                              const BenchmarkFunction* fn) {
  fs::create_directories(dir);
  std::optional<double> f_star;
  if (fn != nullptr) f_star = fn->f_star;
  const TraceArtifact artifact =
      make_trace_artifact(algo_name, kind, name, grid, cfg, res.trace, f_star,
                          res.solved, res.tase_value, res.error);
  write_trace(dir / (stem + ".trace.json"), artifact);

  const std::string echo = config_to_json(cfg).dump();
  std::function<double(GridIndex)> truth;
  if (fn != nullptr) {
    truth = [fn, &grid](GridIndex i) { return fn->point_fn(grid.point(i)); };
  }
  if (res.trace.final_fit.size() > 0) {
    write_fit_csv(dir / (stem + ".fit.csv"),
                  final_table(grid, res.trace.final_fit, res.trace, truth, echo));
  }
  for (const Fit<double>& snap : res.trace.fit_snapshots) {
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), ".fit_iter%04d.csv", snap.iteration());
    write_fit_csv(dir / (stem + suffix),
                  snapshot_table(grid, snap, res.trace, truth, echo));
  }
}

int do_run(const CommonOpts& opt, const fs::path& out_dir) {
  const Algorithm algo = parse_algorithm(opt.algo);
  if (opt.fn.empty() == opt.oracle_cmd.empty()) {
    std::cerr << "run: exactly one of --fn and --oracle is required\n";
    return kExitUsage;
  }

  if (!opt.fn.empty()) {
    const BenchmarkFunction& fn = find_benchmark(opt.fn);
    const GridIndex n = opt.n_points > 0 ? opt.n_points : fn.default_n();
    const Grid<double> grid = fn.grid(n);
    const RunConfig cfg = build_config(opt, n);
    const InstanceResult res = run_instance(algo, fn.objective(), grid, cfg, &fn);
    const std::string stem =
        fn.name + "_" + opt.algo + "_b" + std::to_string(opt.budget);
    write_instance_artifacts(out_dir, stem, opt.algo, "benchmark", fn.name,
                             grid, cfg, res, &fn);
    if (res.error) {
      std::cerr << "run failed: " << *res.error << " (partial trace written)\n";
      return kExitInstance;
    }
    std::cout << "function=" << fn.name << " algo=" << opt.algo
              << " evals=" << res.trace.eval_count()
              << " iterations=" << res.trace.iterations
              << " best_f=" << res.trace.best_value
              << " best_index=" << res.trace.best_index
              << " solved=" << (res.solved.value() ? "true" : "false")
              << " tase=" << res.tase_value.value() << '\n';
    return kExitOk;
  }

  // oracle mode
  const std::vector<double> from = parse_csv_doubles(opt.from_csv);
  const std::vector<double> to = parse_csv_doubles(opt.to_csv);
  if (from.empty() || to.empty() ||
      from.size() != static_cast<std::size_t>(opt.dim) ||
      to.size() != static_cast<std::size_t>(opt.dim)) {
    std::cerr << "run: --oracle needs --dim D with matching --from/--to\n";
    return kExitUsage;
  }
  const GridIndex n = opt.n_points > 0 ? opt.n_points : 5000;
  const Grid<double> grid(to_vector(from), to_vector(to), n);
  const RunConfig cfg = build_config(opt, n);
  Objective objective;
  try {
    objective = spawn_external_oracle({"/bin/sh", "-c", opt.oracle_cmd});
  } catch (const OracleError& e) {
    std::cerr << "oracle spawn failed: " << e.what() << '\n';
    return kExitInstance;
  }
  const InstanceResult res = run_instance(algo, objective, grid, cfg, nullptr);
  const std::string stem = "oracle_" + opt.algo + "_b" + std::to_string(opt.budget);
  write_instance_artifacts(out_dir, stem, opt.algo, "oracle", opt.oracle_cmd,
                           grid, cfg, res, nullptr);
  if (res.error) {
    std::cerr << "run failed: " << *res.error << " (partial trace written)\n";
    return kExitInstance;
  }
  std::cout << "oracle=\"" << opt.oracle_cmd << "\" algo=" << opt.algo
            << " evals=" << res.trace.eval_count()
            << " best_f=" << res.trace.best_value
            << " best_index=" << res.trace.best_index << '\n';
  return kExitOk;
}

std::string csv_bool(std::optional<bool> v) {
  if (!v) return "nan";
  return *v ? "1" : "0";
}

std::string csv_opt(std::optional<double> v) {
  return io_detail::format_double(v ? *v : std::numeric_limits<double>::quiet_NaN());
}

std::string suite_echo(const CommonOpts& opt,
                       const std::vector<std::string>& only,
                       const std::vector<int>& budgets) {
  json j;
  j["budgets"] = budgets;
  j["only"] = only;
  j["n_override"] = opt.n_points;
  j["alpha"] = opt.alpha;
  j["mu"] = opt.mu;
  j["theta"] = opt.theta;
  return j.dump();
}

int do_suite(const CommonOpts& opt, const std::vector<std::string>& only,
             const std::vector<int>& budgets, const fs::path& out_dir) {
  std::vector<const BenchmarkFunction*> fns;
  for (const BenchmarkFunction& b : benchmark_suite()) {
    if (only.empty() ||
        std::find(only.begin(), only.end(), b.name) != only.end()) {
      fns.push_back(&b);
    }
  }
  if (!only.empty() && fns.size() != only.size()) {
    std::cerr << "suite: --only names an unknown function\n";
    return kExitUsage;
  }

  fs::create_directories(out_dir);
  const fs::path traces = out_dir / "traces";
  const std::string echo = suite_echo(opt, only, budgets);
  std::ofstream results(out_dir / "suite_results.csv");
  results << "# linewalker-suite-v1 " << echo << '\n';
  results << "function,algorithm,budget,evals_used,iterations,solved,best_f,"
             "f_star,tase\n";

  std::vector<SolveRecord> records;
  std::map<std::pair<std::string, int>, std::vector<double>> tase_by;
  bool any_error = false;

  for (const BenchmarkFunction* fn : fns) {
    const GridIndex n = opt.n_points > 0 ? opt.n_points : fn->default_n();
    const Grid<double> grid = fn->grid(n);
    for (Algorithm algo : {Algorithm::full, Algorithm::pure, Algorithm::hunter}) {
      for (int budget : budgets) {
        CommonOpts inst = opt;
        inst.budget = budget;
        const RunConfig cfg = build_config(inst, n);
        const InstanceResult res =
            run_instance(algo, fn->objective(), grid, cfg, fn);
        const std::string algo_name = algorithm_name(algo);
        const std::string stem =
            fn->name + "_" + algo_name + "_b" + std::to_string(budget);
        write_instance_artifacts(traces, stem, algo_name, "benchmark",
                                 fn->name, grid, cfg, res, fn);
        if (res.error) {
          any_error = true;
          std::cerr << "suite instance " << stem << " failed: " << *res.error
                    << '\n';
        } else {
          records.push_back({fn->name, algo, budget, res.solved.value()});
          tase_by[{algo_name, budget}].push_back(res.tase_value.value());
        }
        results << fn->name << ',' << algo_name << ',' << budget << ','
                << res.trace.eval_count() << ',' << res.trace.iterations << ','
                << csv_bool(res.solved) << ','
                << io_detail::format_double(res.trace.best_value) << ','
                << io_detail::format_double(fn->f_star) << ','
                << csv_opt(res.tase_value) << '\n';
      }
    }
  }
  results.close();

  std::ofstream frac(out_dir / "fraction_solved.csv");
  frac << "# linewalker-suite-v1 " << echo << '\n';
  frac << "algorithm,budget,solved,total,fraction\n";
  for (const FractionSolvedRow& row : fraction_solved_curve(records, budgets)) {
    frac << algorithm_name(row.algorithm) << ',' << row.budget << ','
         << row.solved << ',' << row.total << ','
         << io_detail::format_double(row.fraction()) << '\n';
  }
  frac.close();

  std::ofstream mt(out_dir / "mean_tase.csv");
  mt << "# linewalker-suite-v1 " << echo << '\n';
  mt << "algorithm,budget,mean_tase\n";
  for (const char* algo : {"full", "pure", "hunter"}) {
    for (int budget : budgets) {
      const auto it = tase_by.find({algo, budget});
      if (it == tase_by.end()) continue;
      mt << algo << ',' << budget << ','
         << io_detail::format_double(mean_tase(it->second)) << '\n';
    }
  }
  mt.close();

  std::cout << "suite finished: " << fns.size() << " functions x "
            << budgets.size() << " budgets x 3 algorithms -> "
            << (out_dir / "suite_results.csv") << '\n';
  return any_error ? kExitInstance : kExitOk;
}

/// Byte comparison of two artifact directories (determinism check).
bool directories_identical(const fs::path& a, const fs::path& b,
                           std::string* diff) {
  std::vector<fs::path> rel;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) {
      rel.push_back(fs::relative(entry.path(), a));
    }
  }
  std::sort(rel.begin(), rel.end());
  for (const fs::path& r : rel) {
    std::ifstream fa(a / r, std::ios::binary);
    std::ifstream fb(b / r, std::ios::binary);
    if (!fb) {
      *diff = "missing in rerun: " + r.string();
      return false;
    }
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) {
      *diff = "artifact differs between runs: " + r.string();
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LineWalker: surrogate-guided one-dimensional black-box "
               "optimization"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::string only_csv;
  std::string budgets_csv = "20,30,40,50";

  const auto add_common = [&](CLI::App* cmd, bool is_run) {
    cmd->add_option("--algo", opt.algo, "algorithm: full | pure | hunter")
        ->check(CLI::IsMember({"full", "pure", "hunter"}));
    if (is_run) {
      cmd->add_option("--fn", opt.fn, "benchmark function name");
      cmd->add_option("--oracle", opt.oracle_cmd,
                      "external oracle command (line protocol on stdio)");
      cmd->add_option("--dim", opt.dim, "oracle input dimension");
      cmd->add_option("--from", opt.from_csv, "segment start, comma separated");
      cmd->add_option("--to", opt.to_csv, "segment end, comma separated");
      cmd->add_option("--budget", opt.budget, "total evaluation budget");
    }
    cmd->add_option("--n", opt.n_points, "grid size override");
    cmd->add_option("--alpha", opt.alpha, "first-derivative weight");
    cmd->add_option("--mu", opt.mu, "second-derivative weight");
    cmd->add_option("--emin", opt.emin, "fit-change tolerance (hunter)");
    cmd->add_option("--theta", opt.theta, "around-the-bend band fraction");
    cmd->add_flag("--snapshots", opt.snapshots, "write per-iteration fits");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_flag("--seedless", opt.seedless,
                  "re-run and require byte-identical artifacts");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one instance");
  add_common(run_cmd, true);
  CLI::App* suite_cmd = app.add_subcommand("suite", "run the benchmark suite");
  add_common(suite_cmd, false);
  suite_cmd->add_option("--only", only_csv, "comma-separated function subset");
  suite_cmd->add_option("--budgets", budgets_csv, "comma-separated budgets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const fs::path out_dir = opt.out_dir;
    const auto invoke = [&](const fs::path& dir) -> int {
      if (run_cmd->parsed()) return do_run(opt, dir);
      std::vector<int> budgets;
      for (const std::string& b : split_csv(budgets_csv)) {
        budgets.push_back(std::stoi(b));
      }
      return do_suite(opt, split_csv(only_csv), budgets, dir);
    };

    const int code = invoke(out_dir);
    if (code != kExitOk || !opt.seedless) return code;

    const fs::path shadow = out_dir.string() + ".recheck";
    fs::remove_all(shadow);
    const int code2 = invoke(shadow);
    if (code2 != kExitOk) return code2;
    std::string diff;
    if (!directories_identical(out_dir, shadow, &diff)) {
      std::cerr << "determinism check FAILED: " << diff << '\n';
      fs::remove_all(shadow);
      return kExitInstance;
    }
    fs::remove_all(shadow);
    std::cout << "determinism check passed: artifacts byte-identical\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInstance;
  }
}
