#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "difflab/estimators.hpp"
#include "difflab/samplers.hpp"
#include "difflab/theory.hpp"

using namespace difflab;
using std::numbers::pi;

namespace {

PointSet integer_lattice(int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(-0.5 * (n - 1) + i);
  return PointSet::on_line(Window::interval(static_cast<double>(n)), xs);
}

double direct_periodogram(const PointSet& p, double k) {
  std::complex<double> s = 0.0;
  for (double x : p.xs()) s += std::exp(std::complex<double>(0.0, -2.0 * pi * k * x));
  return std::norm(s) / p.window().volume();
}

PeriodogramOptions point_evaluation() {
  PeriodogramOptions o;
  o.band = 0.0;
  return o;
}

}  // namespace

TEST_CASE("periodogram of the integer lattice") {
  const PointSet z = integer_lattice(100);
  const auto g = periodogram_1d(z, Grid::make(0.5, 1.0, 2), point_evaluation());
  CHECK(g.value(0) < 0.05);
  CHECK(g.value(1) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("periodogram agrees with the direct sum") {
  const PointSet p = sample_poisson(1.0, Window::interval(3000.0), {4, 0});
  const Grid grid = Grid::make(0.013, 7.7, 41);
  const auto g = periodogram_1d(p, grid, point_evaluation());
  for (std::size_t i = 0; i < grid.n; ++i) CHECK(g.value(i) == doctest::Approx(direct_periodogram(p, grid.at(i))).epsilon(1e-9));
}

TEST_CASE("band averaging equals the mean of direct sums over the band") {
  const PointSet p = sample_poisson(1.0, Window::interval(500.0), {8, 0});
  PeriodogramOptions o;
  o.band = 0.1;
  const auto g = periodogram_1d(p, Grid::make(1.0, 1.0, 1), o);
  // Sub-samples at spacing ~ 1 / L across the band; the mean of the direct
  // sum over a dense sampling of the band is within sampling noise.
  double dense = 0.0;
  const int m = 2000;
  for (int i = 0; i < m; ++i) dense += direct_periodogram(p, 0.95 + 0.1 * (i + 0.5) / m);
  dense /= m;
  CHECK(g.value(0) == doctest::Approx(dense).epsilon(0.15));
}

TEST_CASE("weighted periodogram uses the weights") {
  const Window w = Window::interval(10.0);
  const PointSet base = PointSet::on_line(w, {-1.0, 1.0});
  const WeightedPointSet plus(base, {1.0, 1.0}), minus(base, {1.0, -1.0});
  const Grid grid = Grid::make(0.25, 0.25, 1);
  // |e^{i pi/2} + e^{-i pi/2}|^2 = 0 and |e^{i pi/2} - e^{-i pi/2}|^2 = 4.
  CHECK(std::abs(periodogram_1d(plus, grid, point_evaluation()).value(0)) < 1e-14);
  CHECK(periodogram_1d(minus, grid, point_evaluation()).value(0) == doctest::Approx(0.4));
}

TEST_CASE("mean removal takes out the delta_0 leakage") {
  const PointSet p = sample_poisson(1.0, Window::interval(1000.0), {2, 0});
  const Grid grid = Grid::make(0.0005, 0.0005, 1);
  const double raw = periodogram_1d(p, grid, point_evaluation()).value(0);
  PeriodogramOptions o = point_evaluation();
  o.remove_mean = true;
  const double removed = periodogram_1d(p, grid, o).value(0);
  CHECK(raw > 100.0);
  CHECK(removed < 10.0);
  o.taper = true;
  CHECK_THROWS_AS(periodogram_1d(p, grid, o), Error);
}

TEST_CASE("planar periodogram") {
  const PointSet p = sample_poisson(1.0, Window::disk(50.0), {5, 0});
  const auto spike = periodogram_radial_2d(p, Grid::make(0.002, 0.002, 1), point_evaluation());
  CHECK(spike.value(0) > 10.0);
  // With a single direction the radial average reduces to the direct sum.
  PeriodogramOptions one = point_evaluation();
  one.directions = 1;
  const auto g = periodogram_radial_2d(p, Grid::make(0.8, 0.8, 1), one);
  CHECK(g.value(0) >= 0.0);
  CHECK_THROWS_AS(periodogram_1d(p, Grid::make(1.0, 1.0, 1)), Error);
}

TEST_CASE("pair correlation of the integer lattice") {
  const PointSet z = integer_lattice(100);
  const auto g = pair_correlation_1d(z, 3.0, 6);
  // Bins of width 1/2: atoms at 1 and 2 fall into [1, 1.5) and [2, 2.5).
  CHECK(g.abscissa(0) == doctest::Approx(0.25));
  CHECK(g.value(0) == 0.0);
  CHECK(g.value(1) == 0.0);
  CHECK(g.value(2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.value(3) == 0.0);
  CHECK(g.value(4) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(pair_correlation_1d(z, 60.0, 6), Error);
}

TEST_CASE("pair correlation of Poisson is flat") {
  std::vector<GridFunction> runs;
  for (std::uint64_t r = 0; r < 20; ++r)
    runs.push_back(pair_correlation_1d(sample_poisson(1.0, Window::interval(1e4), {12345, r}), 10.0, 100));
  const auto avg = average_replicas(runs);
  for (std::size_t i = 0; i < avg.size(); ++i) CHECK(std::abs(avg.value(i) - 1.0) < 0.05);

  std::vector<GridFunction> planar;
  for (std::uint64_t r = 0; r < 20; ++r)
    planar.push_back(pair_correlation_radial_2d(sample_poisson(1.0, Window::disk(50.0), {12345, r}), 5.0, 20));
  const auto avg2 = average_replicas(planar);
  for (std::size_t i = 0; i < avg2.size(); ++i) CHECK(std::abs(avg2.value(i) - 1.0) < 0.05);
  CHECK_THROWS_AS(pair_correlation_radial_2d(sample_poisson(1.0, Window::disk(5.0), {1, 0}), 6.0, 5), Error);
}

TEST_CASE("pair correlation of the sine process") {
  std::vector<GridFunction> runs;
  for (std::uint64_t r = 0; r < 20; ++r)
    runs.push_back(pair_correlation_1d(sample_beta_bulk(2, 2048, 0.1, {12345, r}), 5.0, 10));
  const auto avg = average_replicas(runs);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const double a = avg.abscissa(i) - 0.25, b = avg.abscissa(i) + 0.25;
    // Bin mean of 1 - s^2 by Simpson.
    double mean = 0.0;
    const int m = 200;
    for (int j = 0; j <= m; ++j) {
      const double w = (j == 0 || j == m) ? 1 : (j % 2 ? 4 : 2);
      mean += w * (1.0 - dyson_f(2, a + (b - a) * j / m));
    }
    mean /= 3.0 * m;
    CAPTURE(avg.abscissa(i));
    CHECK(std::abs(avg.value(i) - mean) < 0.05);
  }
}

TEST_CASE("replica averaging") {
  const Grid grid = Grid::make(0.0, 1.0, 3);
  const GridFunction a(grid, {1.0, 2.0, 3.0});
  const std::vector<GridFunction> one{a};
  CHECK_FALSE(average_replicas(one).has_standard_errors());
  CHECK(average_replicas(one).value(1) == 2.0);
  const std::vector<GridFunction> same{a, a};
  const auto s = average_replicas(same);
  REQUIRE(s.has_standard_errors());
  for (double e : s.standard_errors()) CHECK(e == 0.0);
  CHECK(s.n_replicas() == 2);
  const std::vector<GridFunction> mixed{a, GridFunction(Grid::make(0.0, 2.0, 3), {1.0, 2.0, 3.0})};
  CHECK_THROWS_AS(average_replicas(mixed), Error);
  CHECK_THROWS_AS(average_replicas(std::vector<GridFunction>{}), Error);
}

TEST_CASE("standard errors follow exponential periodogram statistics") {
  const Grid grid = Grid::make(0.5, 3.0, 6);
  std::vector<GridFunction> runs;
  for (std::uint64_t r = 0; r < 50; ++r)
    runs.push_back(periodogram_1d(sample_poisson(1.0, Window::interval(1000.0), {31, r}), grid, point_evaluation()));
  const auto avg = average_replicas(runs);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const double expect = avg.value(i) / std::sqrt(50.0);
    CHECK(avg.standard_errors()[i] > 0.5 * expect);
    CHECK(avg.standard_errors()[i] < 2.0 * expect);
  }
}

TEST_CASE("Bragg candidates") {
  std::vector<double> v(101, 1.0);
  v[50] = 80.0;
  v[20] = 5.0;
  const GridFunction g(Grid::make(0.0, 5.0, 101), v);
  const auto c = bragg_candidates(g);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == doctest::Approx(2.5));
  CHECK(bragg_candidates(GridFunction(Grid::make(0.0, 1.0, 11), std::vector<double>(11, 0.0))).empty());
}
