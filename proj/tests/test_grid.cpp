#include <doctest.h>

#include <random>

#include "linewalker/grid.hpp"

using namespace linewalker;

TEST_CASE("grid: three points on [0,1]") {
  const Grid<double> g(0.0, 1.0, 3);
  CHECK(g.point(1)[0] == 0.0);
  CHECK(g.point(2)[0] == 0.5);
  CHECK(g.point(3)[0] == 1.0);
  CHECK(g.param(1) == 0.0);
  CHECK(g.param(3) == 1.0);
}

TEST_CASE("grid: 2-D segment endpoints are exact") {
  Eigen::VectorXd a(2), b(2);
  a << -2.0, -7.0;
  b << 4.0, 5.0;
  const Grid<double> g(a, b, 5000);
  CHECK(g.point(1) == a);
  CHECK(g.point(5000) == b);
  CHECK(g.dim() == 2);
}

TEST_CASE("grid: interior point closed form") {
  const Grid<double> g(-3.0, 3.0, 1000);
  const double expected = -3.0 + 499.0 * 6.0 / 999.0;
  CHECK(g.point(500)[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("grid: rejects degenerate inputs") {
  CHECK_THROWS_AS(Grid<double>(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Grid<double>(1.0, 1.0, 10), std::invalid_argument);
  Eigen::VectorXd a(2), b(3);
  a << 0, 0;
  b << 1, 1, 1;
  CHECK_THROWS_AS(Grid<double>(a, b, 10), std::invalid_argument);
  const Grid<double> g(0.0, 1.0, 5);
  CHECK_THROWS_AS(g.point(0), std::out_of_range);
  CHECK_THROWS_AS(g.point(6), std::out_of_range);
}

TEST_CASE("grid: consecutive points equidistant to round-off") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = U(rng);
    double b = U(rng);
    if (a == b) b += 1.0;
    const GridIndex n = 3 + (rng() % 500);
    const Grid<double> g(a, b, n);
    const double h = (b - a) / double(n - 1);
    for (GridIndex i = 1; i < n; ++i) {
      const double step = g.point(i + 1)[0] - g.point(i)[0];
      CHECK(step == doctest::Approx(h).epsilon(1e-9));
    }
    CHECK(g.point(1)[0] == a);
    CHECK(g.point(n)[0] == b);
  }
}

TEST_CASE("grid: float instantiation") {
  const Grid<float> g(0.0f, 2.0f, 5);
  CHECK(g.point(3)[0] == doctest::Approx(1.0f));
}
