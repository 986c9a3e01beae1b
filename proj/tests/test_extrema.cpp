#include <doctest.h>

#include <cmath>
#include <random>

#include "linewalker/extrema.hpp"

using namespace linewalker;

namespace {

Fit<double> make_fit(std::initializer_list<double> vals) {
  Vector<double> v(static_cast<GridIndex>(vals.size()));
  GridIndex i = 0;
  for (double x : vals) v[i++] = x;
  return Fit<double>(v);
}

}  // namespace

TEST_CASE("extrema: alternating pattern") {
  const auto sets = detect_extrema(make_fit({0, 1, 0, 1, 0}), 0.1, 0.1);
  CHECK(sets.maxima == std::vector<GridIndex>{2, 4});
  CHECK(sets.minima == std::vector<GridIndex>{3});
  CHECK(count_interior_extrema(make_fit({0, 1, 0, 1, 0}), 0.1, 0.1) == 3);
}

TEST_CASE("extrema: monotone fit has none") {
  for (double d : {0.0, 0.5}) {
    const auto sets = detect_extrema(make_fit({0, 1, 2, 3}), d, d);
    CHECK(sets.maxima.empty());
    CHECK(sets.minima.empty());
  }
}

TEST_CASE("extrema: plateau fails the strict test") {
  const auto sets = detect_extrema(make_fit({0, 1, 1, 0}), 0.0, 0.0);
  CHECK(sets.maxima.empty());
  CHECK(sets.minima.empty());
}

TEST_CASE("extrema: constant fit counts zero") {
  CHECK(count_interior_extrema(make_fit({2, 2, 2, 2, 2}), 0.0, 0.0) == 0);
}

TEST_CASE("extrema: indices are interior and sets disjoint") {
  const auto sets = detect_extrema(make_fit({5, 0, 1, 0, 9}), 0.0, 0.0);
  CHECK(sets.minima == std::vector<GridIndex>{2, 4});
  CHECK(sets.maxima == std::vector<GridIndex>{3});
}

TEST_CASE("extrema: raising a tolerance never enlarges its set") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector<double> v(30);
    for (GridIndex i = 0; i < 30; ++i) v[i] = U(rng);
    const Fit<double> fit(v);
    std::size_t prev_max = SIZE_MAX, prev_min = SIZE_MAX;
    for (double d : {0.0, 0.01, 0.05, 0.2, 1.0}) {
      const auto sets = detect_extrema(fit, d, d);
      CHECK(sets.maxima.size() <= prev_max);
      CHECK(sets.minima.size() <= prev_min);
      prev_max = sets.maxima.size();
      prev_min = sets.minima.size();
    }
  }
}

TEST_CASE("extrema: negating the fit swaps the sets") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector<double> v(25);
    for (GridIndex i = 0; i < 25; ++i) v[i] = U(rng);
    const double d = 0.02;
    const auto pos = detect_extrema(Fit<double>(v), d, d);
    const auto neg = detect_extrema(Fit<double>((-v).eval()), d, d);
    CHECK(pos.maxima == neg.minima);
    CHECK(pos.minima == neg.maxima);
  }
}

TEST_CASE("extrema: dense rastrigin fit has 13 interior extrema") {
  // Ground truth sampled at every grid point of an odd-sized grid (an even
  // grid straddles x = 0 with a two-point tie that the strict test drops).
  const GridIndex n = 1001;
  SmoothingSystem<double> system(n, 0.0, 0.01);
  for (GridIndex i = 1; i <= n; ++i) {
    const double x = -3.0 + 6.0 * double(i - 1) / double(n - 1);
    system.add_sample(i, 10.0 + x * x - 10.0 * std::cos(2.0 * M_PI * x));
  }
  const Fit<double> fit = fit_surrogate(system);
  const double delta = fit.range() * 1e-6;
  const auto sets = detect_extrema(fit, delta, delta);
  CHECK(sets.count() == 13);
  CHECK(sets.maxima.size() == 6);
  CHECK(sets.minima.size() == 7);
}

TEST_CASE("extrema: rejects bad inputs") {
  CHECK_THROWS_AS(detect_extrema(make_fit({0, 1}), 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(detect_extrema(make_fit({0, 1, 0}), -1.0, 0.0),
                  std::invalid_argument);
}
