#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "linewalker/drivers.hpp"
#include "linewalker/grid.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

/// One benchmark instance: a scalar restriction of a (possibly 2-D)
/// function to a line segment, with its domain, reference optimum, and grid
/// size. The scalar argument is the first coordinate along the segment.
struct BenchmarkFunction {
  std::string name;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  int dim = 1;
  Eigen::VectorXd segment_start;
  Eigen::VectorXd segment_end;
  std::function<double(double)> scalar_fn;
  std::function<double(const Eigen::VectorXd&)> point_fn;
  double x_star_lo = 0.0;  // minimizer (interval when lo < hi)
  double x_star_hi = 0.0;
  double f_star = 0.0;
  bool smooth = true;
  GridIndex grid_override = 0;  // 0: use the suite default of 5000

  double evaluate(double t) const {
    if (!(t >= domain_lo && t <= domain_hi)) {
      throw std::out_of_range(name + ": argument outside [" +
                              std::to_string(domain_lo) + ", " +
                              std::to_string(domain_hi) + "]");
    }
    return scalar_fn(t);
  }

  double x_star() const { return 0.5 * (x_star_lo + x_star_hi); }

  GridIndex default_n() const { return grid_override ? grid_override : 5000; }

  Grid<double> grid(GridIndex n_points = 0) const {
    return Grid<double>(segment_start, segment_end,
                        n_points ? n_points : default_n());
  }

  Objective objective() const {
    auto fn = point_fn;
    return [fn](const Eigen::VectorXd& x) { return fn(x); };
  }
};

/// Restriction of a D-dimensional function to the segment start -> end:
/// t in [0, 1] maps to start + t * (end - start).
inline std::function<double(double)> line_restriction(
    std::function<double(const Eigen::VectorXd&)> inner,
    const Eigen::VectorXd& start, const Eigen::VectorXd& end) {
  return [inner = std::move(inner), start, end](double t) {
    Eigen::VectorXd p(start.size());
    for (Eigen::Index k = 0; k < start.size(); ++k) {
      p[k] = std::lerp(start[k], end[k], t);
    }
    return inner(p);
  };
}

namespace bench_detail {

inline constexpr double kPi = std::numbers::pi;

inline double ackley(double x) {
  return -20.0 * std::exp(-0.2 * std::abs(x)) - std::exp(std::cos(2.0 * kPi * x)) +
         20.0 + std::numbers::e;
}

inline double damped_oscillator(double x) {
  return -std::exp(-std::abs(x)) * std::cos(2.0 * kPi * std::abs(x));
}

inline double dejong5_2d(double x1, double x2) {
  static constexpr std::array<double, 5> cells = {-32.0, -16.0, 0.0, 16.0, 32.0};
  double s = 0.002;
  for (int i = 0; i < 25; ++i) {
    const double a1 = cells[static_cast<std::size_t>(i % 5)];
    const double a2 = cells[static_cast<std::size_t>(i / 5)];
    const double d1 = x1 - a1;
    const double d2 = x2 - a2;
    s += 1.0 / (double(i + 1) + std::pow(d1, 6) + std::pow(d2, 6));
  }
  return 1.0 / s;
}

inline double grlee12_variant(double x) {
  const double quartic = std::pow(x - 1.0, 4);
  if (x < 0.71) {
    return std::sin(10.0 * kPi * std::pow(x, 1.10)) / (2.0 * x) + quartic + 5.0;
  }
  if (x <= 0.86) {
    return std::sin(10.0 * kPi * std::pow(x, 0.75)) / (2.0 * x) + quartic + 5.0;
  }
  return std::sin(10.0 * kPi * std::pow(x, 0.75)) / (2.0 * x) + quartic + 1.0;
}

inline double langermann(double x, const std::array<double, 5>& a) {
  static constexpr std::array<double, 5> c = {1.0, 2.0, 5.0, 2.0, 3.0};
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double d2 = (x - a[i]) * (x - a[i]);
    s += c[i] * std::exp(-d2 / kPi) * std::cos(kPi * d2);
  }
  return s;
}

inline double langer(double x) {
  return langermann(x, {3.0, 5.0, 2.0, 1.0, 7.0});
}

inline double langer2(double x) {
  return langermann(x, {5.0, 1.0, 5.0, 2.0, 8.0});
}

inline double michal(double x) {
  return -std::sin(x) * std::pow(std::sin(x * x / kPi), 20);
}

inline double plateau_2d(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    s += std::abs(std::floor(p[k]));
  }
  return s;
}

inline double rastrigin(double x) {
  return 10.0 + x * x - 10.0 * std::cos(2.0 * kPi * x);
}

inline double sawtooth_d(double x) {
  const auto tri = [](double w) { return (2.0 / kPi) * std::asin(std::sin(w)); };
  if (x <= 0.0) return tri(kPi * x) - std::abs(x);
  if (x < 0.75) return tri(3.0 * kPi * x) - std::abs(x) + 1.0;
  if (x <= 1.0) return tri(kPi * x) - 6.0;
  if (x < 3.25) return tri(3.0 * kPi * x) - std::abs(x) + 1.0;
  return tri(kPi * x) - std::abs(x) + 1.0;
}

inline double schwefel(double x) {
  return 418.9829 - x * std::sin(std::sqrt(std::abs(x)));
}

inline double stybtang(double x) {
  return 0.5 * (std::pow(x, 4) - 16.0 * x * x + 5.0 * x);
}

inline double zakharov(double x) {
  return 1.5 * x * x + 0.5 * std::pow(x, 4);
}

inline double easom_schaffer2a(double x) {
  if (x >= 0.0) {
    const double w = x - 25.0;
    const double c = std::cos(w);
    return -2.0 * c * c * std::exp(-2.0 * (w - kPi) * (w - kPi));
  }
  const double w = 0.3 * x;
  const double s = std::sin(w * w);
  const double q = 1.0 + 0.001 * w * w;
  return -0.5 - (s * s - 0.5) / (q * q) - 0.1 * std::abs(w);
}

inline double egg2(double x) {
  const double r = std::cbrt(x);
  const double t1 =
      -(x + 47.0) * std::sin(std::sqrt(std::abs(x + r / 2.0 + 47.0)));
  const double t2 = -x * std::sin(std::sqrt(std::abs(r * r - 47.0)));
  return t1 + t2;
}

inline double holder(double x) {
  return -std::abs(std::sin(x) * std::cos(x) *
                   std::exp(std::abs(1.0 - std::sqrt(2.0 * x * x) / kPi)));
}

inline double levy(double x) {
  const double w = 1.0 + (x - 1.0) / 4.0;
  const double s1 = std::sin(kPi * w);
  const double s2 = std::sin(2.0 * kPi * w);
  return s1 * s1 + (w - 1.0) * (w - 1.0) * (1.0 + s2 * s2);
}

inline double levy13(double x) {
  const double s3 = std::sin(3.0 * kPi * x);
  const double s2 = std::sin(2.0 * kPi * x);
  return -s3 * s3 - (x - 1.0) * (x - 1.0) * (2.0 + s3 * s3 + s2 * s2);
}

inline double schaffer2a(double x) {
  const double s = std::sin(x * x);
  const double q = 1.0 + 0.001 * x * x;
  return -0.5 - (s * s - 0.5) / (q * q) - 0.2 * std::abs(x);
}

inline double shekel(double x) {
  static constexpr std::array<double, 10> beta = {0.1, 0.2, 0.2, 0.4, 0.4,
                                                  0.6, 0.3, 0.7, 0.5, 0.5};
  static constexpr std::array<std::array<double, 10>, 4> c = {{
      {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
      {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6},
      {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
      {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6},
  }};
  double s = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    double inner = beta[i];
    for (std::size_t j = 0; j < 4; ++j) {
      const double d = x - c[j][i];
      inner += d * d;
    }
    s += 1.0 / inner;
  }
  return -s;
}

inline Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd p(1);
  p[0] = v;
  return p;
}

inline Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd p(2);
  p[0] = a;
  p[1] = b;
  return p;
}

inline BenchmarkFunction scalar_benchmark(std::string name, double lo,
                                          double hi, double (*fn)(double),
                                          double x_star, double f_star,
                                          bool smooth,
                                          GridIndex grid_override = 0) {
  BenchmarkFunction b;
  b.name = std::move(name);
  b.domain_lo = lo;
  b.domain_hi = hi;
  b.dim = 1;
  b.segment_start = vec1(lo);
  b.segment_end = vec1(hi);
  b.scalar_fn = fn;
  b.point_fn = [fn](const Eigen::VectorXd& p) { return fn(p[0]); };
  b.x_star_lo = b.x_star_hi = x_star;
  b.f_star = f_star;
  b.smooth = smooth;
  b.grid_override = grid_override;
  return b;
}

}  // namespace bench_detail

/// The 20-function suite. Reference optima follow the implemented formulas;
/// see the tests for the per-function validation to 1e-4.
inline const std::vector<BenchmarkFunction>& benchmark_suite() {
  using namespace bench_detail;
  static const std::vector<BenchmarkFunction> suite = [] {
    std::vector<BenchmarkFunction> v;
    v.push_back(scalar_benchmark("ackley", -17.0, 32.0, &ackley, 0.0, 0.0,
                                 true, 10000));
    v.push_back(scalar_benchmark("damped", -kPi / 8.0, kPi, &damped_oscillator,
                                 0.0, -1.0, true));
    {
      BenchmarkFunction b;
      b.name = "dejong5";
      b.domain_lo = -65.536;
      b.domain_hi = 65.536;
      b.dim = 2;
      b.segment_start = vec2(-65.536, -65.536);
      b.segment_end = vec2(65.536, 65.536);
      b.point_fn = [](const Eigen::VectorXd& p) {
        return dejong5_2d(p[0], p[1]);
      };
      b.scalar_fn = [](double t) { return dejong5_2d(t, t); };
      b.x_star_lo = b.x_star_hi = -31.97600;
      b.f_star = 0.99800;
      b.smooth = true;
      v.push_back(b);
    }
    v.push_back(scalar_benchmark("grlee12", 0.5, 2.5, &grlee12_variant,
                                 0.9320342569, 0.4640941829, false));
    v.push_back(scalar_benchmark("langer", 0.0, 10.0, &langer, 6.00295,
                                 -3.66452, true));
    v.push_back(scalar_benchmark("michal", 0.0, 13.0, &michal, 8.00922,
                                 -0.98795, true));
    {
      BenchmarkFunction b;
      b.name = "plateau";
      b.domain_lo = -2.0;
      b.domain_hi = 4.0;
      b.dim = 2;
      b.segment_start = vec2(-2.0, -7.0);
      b.segment_end = vec2(4.0, 5.0);
      b.point_fn = &plateau_2d;
      b.scalar_fn = [](double t) {
        return std::abs(std::floor(t)) + std::abs(std::floor(2.0 * t - 3.0));
      };
      b.x_star_lo = 1.5;
      b.x_star_hi = 2.0;
      b.f_star = 1.0;
      b.smooth = false;
      v.push_back(b);
    }
    v.push_back(scalar_benchmark("rastrigin", -3.0, 3.0, &rastrigin, 0.0, 0.0,
                                 true));
    v.push_back(scalar_benchmark("sawtoothD", -5.0, 5.0, &sawtooth_d, 1.0,
                                 -6.0, false));
    v.push_back(scalar_benchmark("schwefel", -500.0, 500.0, &schwefel,
                                 420.96870, 1.27278e-5, true));
    v.push_back(scalar_benchmark("stybtang", -5.0, 5.0, &stybtang,
                                 -2.9035340301, -39.1661657038, true));
    v.push_back(scalar_benchmark("zakharov", -5.0, 10.0, &zakharov, 0.0, 0.0,
                                 true));
    v.push_back(scalar_benchmark("easom-schaffer2A", -10.0, 30.0,
                                 &easom_schaffer2a, 28.14363, -2.0, true));
    v.push_back(scalar_benchmark("egg2", -600.0, 200.0, &egg2, -600.0,
                                 -1140.4401941920, false));
    v.push_back(scalar_benchmark("holder", 0.0, 11.0, &holder, 10.32006,
                                 -18.69332, false));
    v.push_back(scalar_benchmark("langer2", 3.0, 8.0, &langer2, 4.02921,
                                 -3.94660, true));
    v.push_back(scalar_benchmark("levy", -10.0, 2.0, &levy, 1.0, 0.0, true));
    v.push_back(scalar_benchmark("levy13", -3.0, 2.0, &levy13, -2.81896,
                                 -56.48262, true));
    v.push_back(scalar_benchmark("schaffer2A", -2.0, 3.0, &schaffer2a,
                                 2.80596, -1.55304, false));
    v.push_back(scalar_benchmark("shekel", 0.0, 9.0, &shekel, 4.0, -10.53626,
                                 true));
    return v;
  }();
  return suite;
}

inline const BenchmarkFunction& find_benchmark(const std::string& name) {
  for (const BenchmarkFunction& b : benchmark_suite()) {
    if (b.name == name) return b;
  }
  throw std::invalid_argument("unknown benchmark function: " + name);
}

inline double eval_benchmark(const std::string& name, double t) {
  return find_benchmark(name).evaluate(t);
}

}  // namespace linewalker
