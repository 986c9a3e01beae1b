#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "linewalker/drivers.hpp"
#include "linewalker/objectives.hpp"

using namespace linewalker;

namespace {

Objective wrap(double (*fn)(double)) {
  return [fn](const Eigen::VectorXd& x) { return fn(x[0]); };
}

bool indices_distinct(const RunTrace& trace) {
  std::set<GridIndex> seen;
  for (const Evaluation& e : trace.evaluations) {
    if (!seen.insert(e.index).second) return false;
  }
  return true;
}

bool traces_equal(const RunTrace& a, const RunTrace& b) {
  return a.evaluations == b.evaluations && a.incumbents == b.incumbents &&
         a.iterations == b.iterations && a.best_index == b.best_index &&
         a.best_value == b.best_value &&
         a.final_fit.values() == b.final_fit.values();
}

}  // namespace

TEST_CASE("initial samples: evaluated formula values") {
  const auto idx = initial_sample_indices(1000, 11);
  CHECK(idx == std::vector<GridIndex>{1, 101, 201, 301, 401, 501, 601, 701,
                                      801, 901, 1000});
  CHECK(initial_sample_indices(11, 11) ==
        std::vector<GridIndex>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  const auto big = initial_sample_indices(5000, 11);
  CHECK(big == std::vector<GridIndex>{1, 501, 1001, 1501, 2001, 2501, 3001,
                                      3501, 4001, 4501, 5000});
  CHECK_THROWS_AS(initial_sample_indices(10, 11), std::invalid_argument);
  CHECK_THROWS_AS(initial_sample_indices(100, 1), std::invalid_argument);
}

TEST_CASE("hunter: rastrigin walkthrough stays in the reported envelope") {
  const BenchmarkFunction& fn = find_benchmark("rastrigin");
  const Grid<double> grid = fn.grid(1000);
  RunConfig cfg;
  cfg.n_points = 1000;
  cfg.e_max_total = 100000;
  cfg.e_min = 1e-3;
  const RunTrace trace = extrema_hunter(fn.objective(), grid, cfg);
  CHECK(trace.eval_count() >= 49);
  CHECK(trace.eval_count() <= 55);
  CHECK(trace.iterations >= 5);
  CHECK(trace.iterations <= 7);
  CHECK(std::abs(grid.point(trace.best_index)[0]) <= 0.01);
  CHECK(trace.best_value <= 0.005);
  CHECK(indices_distinct(trace));
}

TEST_CASE("hunter: affine objective stops after one iteration") {
  const Grid<double> grid(-2.0, 3.0, 500);
  RunConfig cfg;
  cfg.n_points = 500;
  cfg.e_max_total = 100000;
  const RunTrace trace = extrema_hunter(
      [](const Eigen::VectorXd& x) { return 2.5 * x[0] + 1.0; }, grid, cfg);
  CHECK(trace.eval_count() == 11);
  CHECK(trace.iterations == 1);
  for (const Evaluation& e : trace.evaluations) {
    CHECK(e.reason == EvalReason::initial);
  }
}

TEST_CASE("hunter: quadratic bowl lands on the grid argmin cheaply") {
  const GridIndex n = 1000;
  const Grid<double> grid(-2.0, 3.0, n);
  const double vertex = 0.6180339887;
  const auto bowl = [vertex](const Eigen::VectorXd& x) {
    return (x[0] - vertex) * (x[0] - vertex);
  };
  RunConfig cfg;
  cfg.n_points = 1000;
  cfg.e_max_total = 100000;
  const RunTrace trace = extrema_hunter(bowl, grid, cfg);

  GridIndex grid_argmin = 1;
  double best = bowl(grid.point(1));
  for (GridIndex i = 2; i <= n; ++i) {
    const double v = bowl(grid.point(i));
    if (v < best) {
      best = v;
      grid_argmin = i;
    }
  }
  CHECK(trace.best_index == grid_argmin);
  CHECK(trace.eval_count() <= 25);  // 11 initial + a handful
}

TEST_CASE("budgeted drivers: budget 11 returns the initial design only") {
  const BenchmarkFunction& fn = find_benchmark("shekel");
  const Grid<double> grid = fn.grid(500);
  RunConfig cfg;
  cfg.n_points = 500;
  cfg.e_max_total = 11;
  for (Algorithm algo : {Algorithm::full, Algorithm::pure}) {
    const RunTrace trace = run_algorithm(algo, fn.objective(), grid, cfg);
    CHECK(trace.eval_count() == 11);
    CHECK(trace.iterations == 0);
    CHECK(trace.final_fit.size() == 500);
  }
}

TEST_CASE("budgeted drivers: exact budget, distinct indices, monotone incumbent") {
  // a battery of smooth objectives with assorted shapes
  const std::vector<std::function<double(double)>> battery = {
      [](double x) { return std::sin(3.0 * x) + 0.3 * x; },
      [](double x) { return std::cos(5.0 * x) * std::exp(-0.1 * x * x); },
      [](double x) { return x * x - 2.0 * std::sin(7.0 * x); },
      [](double x) { return std::abs(x - 0.7) + std::sin(9.0 * x) * 0.2; },
  };
  for (std::size_t which = 0; which < battery.size(); ++which) {
    const auto& f = battery[which];
    const Grid<double> grid(-3.0, 4.0, 800);
    RunConfig cfg;
    cfg.n_points = 800;
    for (int budget : {20, 37, 50}) {
      cfg.e_max_total = budget;
      for (Algorithm algo : {Algorithm::full, Algorithm::pure}) {
        const RunTrace trace = run_algorithm(
            algo, [&f](const Eigen::VectorXd& x) { return f(x[0]); }, grid,
            cfg);
        CHECK(trace.eval_count() == budget);
        CHECK(indices_distinct(trace));
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < trace.incumbents.size(); ++k) {
          CHECK(trace.incumbents[k].best_value <= best);
          best = trace.incumbents[k].best_value;
          CHECK(trace.incumbents[k].eval_count == int(k) + 1);
        }
      }
    }
  }
}

TEST_CASE("full: grid as small as the budget samples everything") {
  const BenchmarkFunction& fn = find_benchmark("shekel");
  const Grid<double> grid = fn.grid(50);
  RunConfig cfg;
  cfg.n_points = 50;
  cfg.e_max_total = 50;
  const RunTrace trace = linewalker_full(fn.objective(), grid, cfg);
  CHECK(trace.eval_count() == 50);
  CHECK(indices_distinct(trace));
  double exact = std::numeric_limits<double>::infinity();
  for (GridIndex i = 1; i <= 50; ++i) {
    exact = std::min(exact, fn.point_fn(grid.point(i)));
  }
  CHECK(trace.best_value == exact);
}

TEST_CASE("pure: exploration dominates the tail once extrema stabilize") {
  const BenchmarkFunction& fn = find_benchmark("stybtang");
  const Grid<double> grid = fn.grid(5000);
  RunConfig cfg;
  cfg.e_max_total = 50;
  const RunTrace trace = linewalker_pure(fn.objective(), grid, cfg);
  int exploration_tail = 0;
  for (int k = trace.eval_count() - 20; k < trace.eval_count(); ++k) {
    if (trace.evaluations[std::size_t(k)].reason == EvalReason::exploration) {
      ++exploration_tail;
    }
  }
  CHECK(exploration_tail >= 15);
}

TEST_CASE("budgeted drivers: several samples per iteration stay within budget") {
  const BenchmarkFunction& fn = find_benchmark("langer");
  const Grid<double> grid = fn.grid(3000);
  RunConfig cfg;
  cfg.n_points = 3000;
  cfg.e_max_itr = 3;
  for (int budget : {25, 50}) {
    cfg.e_max_total = budget;
    for (Algorithm algo : {Algorithm::full, Algorithm::pure}) {
      const RunTrace trace = run_algorithm(algo, fn.objective(), grid, cfg);
      CHECK(trace.eval_count() == budget);
      CHECK(indices_distinct(trace));
      // at most e_max_itr evaluations share an iteration number
      std::map<int, int> per_iter;
      for (const Evaluation& e : trace.evaluations) {
        if (e.iteration > 0) ++per_iter[e.iteration];
      }
      for (const auto& [it, count] : per_iter) CHECK(count <= 3);
    }
  }
}

TEST_CASE("budgeted drivers: a constant objective explores uniformly") {
  const Grid<double> grid(0.0, 1.0, 900);
  RunConfig cfg;
  cfg.n_points = 900;
  cfg.e_max_total = 30;
  const Objective flat = [](const Eigen::VectorXd&) { return 4.25; };
  for (Algorithm algo : {Algorithm::full, Algorithm::pure}) {
    const RunTrace trace = run_algorithm(algo, flat, grid, cfg);
    CHECK(trace.eval_count() == 30);
    CHECK(indices_distinct(trace));
    // a flat fit has no strict extrema, so every step is exploration
    for (int k = 11; k < trace.eval_count(); ++k) {
      CHECK(trace.evaluations[std::size_t(k)].reason ==
            EvalReason::exploration);
    }
    CHECK(trace.final_fit.range() == 0.0);
  }
  const RunTrace hunter = extrema_hunter(flat, grid, cfg);
  CHECK(hunter.eval_count() == 11);  // no extrema to chase
}

TEST_CASE("hunter: the evaluation cap binds exactly") {
  const BenchmarkFunction& fn = find_benchmark("rastrigin");
  const Grid<double> grid = fn.grid(1000);
  RunConfig cfg;
  cfg.n_points = 1000;
  cfg.e_max_total = 30;  // below the ~50 the run would take uncapped
  const RunTrace trace = extrema_hunter(fn.objective(), grid, cfg);
  CHECK(trace.eval_count() == 30);
  CHECK(indices_distinct(trace));
}

TEST_CASE("pure and full: double runs are identical (no hidden state)") {
  const BenchmarkFunction& fn = find_benchmark("langer");
  const Grid<double> grid = fn.grid(2000);
  RunConfig cfg;
  cfg.n_points = 2000;
  cfg.e_max_total = 40;
  for (Algorithm algo : {Algorithm::full, Algorithm::pure, Algorithm::hunter}) {
    const RunTrace a = run_algorithm(algo, fn.objective(), grid, cfg);
    const RunTrace b = run_algorithm(algo, fn.objective(), grid, cfg);
    CHECK(traces_equal(a, b));
  }
}

TEST_CASE("full: shekel budget-30 trace is structurally sound") {
  const BenchmarkFunction& fn = find_benchmark("shekel");
  const Grid<double> grid = fn.grid(5000);
  RunConfig cfg;
  cfg.e_max_total = 30;
  const RunTrace trace = linewalker_full(fn.objective(), grid, cfg);
  REQUIRE(trace.eval_count() == 30);
  CHECK(indices_distinct(trace));
  CHECK(trace.iterations == 19);
  // equal-width initial gaps: every exploration midpoint is 250 past a
  // sampled lattice point
  for (const Evaluation& e : trace.evaluations) {
    if (e.reason == EvalReason::exploration) {
      CHECK((e.index - 251) % 500 == 0);
    }
  }
  // the global valley near x = 4 (index ~2223) is located
  CHECK(std::abs(grid.point(trace.best_index)[0] - 4.0) <= 0.2);
  CHECK(trace.best_value <= -10.0);
}

TEST_CASE("drivers: evaluation failure carries the partial trace") {
  const Grid<double> grid(0.0, 1.0, 200);
  RunConfig cfg;
  cfg.n_points = 200;
  cfg.e_max_total = 30;
  int calls = 0;
  const Objective flaky = [&calls](const Eigen::VectorXd& x) {
    if (++calls > 14) throw std::runtime_error("simulator crashed");
    return std::sin(25.0 * x[0]);
  };
  try {
    linewalker_full(flaky, grid, cfg);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.partial().eval_count() == 14);
    CHECK(std::string(e.what()).find("simulator crashed") != std::string::npos);
  }

  calls = 0;
  const Objective poisoned = [&calls](const Eigen::VectorXd&) {
    return ++calls > 12 ? std::nan("") : double(calls);
  };
  try {
    linewalker_pure(poisoned, grid, cfg);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.partial().eval_count() == 12);
  }
}

TEST_CASE("drivers: independent runs are safe on separate threads") {
  const BenchmarkFunction& shekel = find_benchmark("shekel");
  const BenchmarkFunction& levy = find_benchmark("levy");
  RunConfig cfg;
  cfg.n_points = 1500;
  cfg.e_max_total = 30;
  const Grid<double> g1 = shekel.grid(1500);
  const Grid<double> g2 = levy.grid(1500);
  const RunTrace serial1 = linewalker_full(shekel.objective(), g1, cfg);
  const RunTrace serial2 = linewalker_full(levy.objective(), g2, cfg);

  RunTrace threaded1, threaded2;
  std::thread t1([&] { threaded1 = linewalker_full(shekel.objective(), g1, cfg); });
  std::thread t2([&] { threaded2 = linewalker_full(levy.objective(), g2, cfg); });
  t1.join();
  t2.join();
  CHECK(traces_equal(serial1, threaded1));
  CHECK(traces_equal(serial2, threaded2));
}

TEST_CASE("drivers: config validation") {
  const Grid<double> grid(0.0, 1.0, 100);
  RunConfig cfg;
  cfg.n_points = 100;
  cfg.e_max_total = 5;  // below the initial design size
  CHECK_THROWS_AS(linewalker_full(wrap([](double x) { return x; }), grid, cfg),
                  std::invalid_argument);
  cfg.e_max_total = 20;
  cfg.n_points = 99;  // config and grid disagree
  CHECK_THROWS_AS(linewalker_pure(wrap([](double x) { return x; }), grid, cfg),
                  std::invalid_argument);
  cfg.n_points = 100;
  cfg.theta = 2.0;
  CHECK_THROWS_AS(extrema_hunter(wrap([](double x) { return x; }), grid, cfg),
                  std::invalid_argument);
}

TEST_CASE("full: every evaluation reason is tagged sensibly") {
  const BenchmarkFunction& fn = find_benchmark("shekel");
  const Grid<double> grid = fn.grid(5000);
  RunConfig cfg;
  cfg.e_max_total = 30;
  const RunTrace trace = linewalker_full(fn.objective(), grid, cfg);
  std::map<EvalReason, int> histogram;
  for (const Evaluation& e : trace.evaluations) ++histogram[e.reason];
  CHECK(histogram[EvalReason::initial] == 11);
  CHECK(histogram[EvalReason::exploration] >= 1);
  // moved samples keep their aspiration tag; plain moved ones read "bend"
  for (const Evaluation& e : trace.evaluations) {
    if (e.reason == EvalReason::extremum || e.reason == EvalReason::initial ||
        e.reason == EvalReason::exploration) {
      CHECK(e.index == e.candidate);
    }
  }
}
