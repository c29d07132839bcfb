#include <doctest.h>

#include <cmath>
#include <numbers>

#include "difflab/config.hpp"
#include "difflab/theory.hpp"
#include "oracles.hpp"

using namespace difflab;
using std::numbers::pi;

namespace {

WaitingDistribution delta_one() {
  return WaitingDistribution::discrete(std::vector<std::pair<double, double>>{{1.0, 1.0}});
}

WaitingDistribution tiling() { return parse_waiting("discrete 1/2:1/2 3/2:1/2"); }

}  // namespace

TEST_CASE("Poisson pair") {
  const auto one = poisson_theory(1.0);
  REQUIRE(one.autocorrelation.atoms.size() == 1);
  CHECK(one.autocorrelation.atoms[0].location == 0.0);
  CHECK(one.autocorrelation.atoms[0].intensity == 1.0);
  CHECK(one.autocorrelation.density(3.7) == 1.0);
  REQUIRE(one.diffraction.atoms.size() == 1);
  CHECK(one.diffraction.atoms[0].intensity == 1.0);
  CHECK(one.diffraction.density(-0.2) == 1.0);

  const auto two = poisson_theory(2.0);
  CHECK(two.diffraction.atoms[0].intensity == 4.0);
  CHECK(two.diffraction.density(1.0) == 2.0);
  CHECK(two.autocorrelation.atoms[0].intensity == 2.0);
  CHECK(two.autocorrelation.density(1.0) == 4.0);

  const auto zero = poisson_theory(0.0);
  CHECK(zero.diffraction.atoms.empty());
  CHECK(zero.diffraction.density(1.0) == 0.0);
  CHECK(zero.autocorrelation.atoms.empty());
  CHECK_THROWS_AS(poisson_theory(-1.0), Error);
}

TEST_CASE("marked Poisson pair has no Bragg atom") {
  const auto m = marked_poisson_theory(1.0);
  CHECK(m.diffraction.atoms.empty());
  CHECK(m.diffraction.density(0.01) == 1.0);
  REQUIRE(m.autocorrelation.atoms.size() == 1);
  CHECK(m.autocorrelation.atoms[0].intensity == 1.0);
  CHECK_FALSE(m.autocorrelation.has_ac_part());
  const auto z = marked_poisson_theory(0.0);
  CHECK(z.diffraction.density(1.0) == 0.0);
  CHECK(z.autocorrelation.atoms.empty());
}

TEST_CASE("renewal backscatter") {
  const auto expo = WaitingDistribution::exponential();
  for (double k : {0.01, 0.3, 1.0, 4.2, 50.0}) CHECK(std::abs(renewal_backscatter(expo, k)) < 1e-12);
  for (double k : {0.25, 0.5, 1.37, 7.9}) CHECK(renewal_backscatter(delta_one(), k) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(renewal_backscatter(tiling(), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Equivalent form (1 - |mu^|^2) / |1 - mu^|^2 = 1 - h.
  const auto g = WaitingDistribution::gamma(2.0);
  for (double k : {0.2, 0.9, 2.3}) {
    const auto m = char_fn(g, k);
    CHECK(1.0 - renewal_backscatter(g, k) == doctest::Approx((1.0 - std::norm(m)) / std::norm(1.0 - m)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(renewal_backscatter(delta_one(), 2.0), Error);
  CHECK_THROWS_AS(renewal_backscatter(tiling(), 2.0), Error);
  CHECK_THROWS_AS(renewal_backscatter(expo, 0.0), Error);
}

TEST_CASE("renewal pure point part") {
  CHECK(std::holds_alternative<SingleAtomAtZero>(renewal_pure_point(WaitingDistribution::exponential())));
  const auto comb1 = std::get<LatticeComb>(renewal_pure_point(delta_one()));
  CHECK(comb1.spacing == doctest::Approx(1.0));
  CHECK(comb1.intensity == 1.0);
  const auto comb2 = std::get<LatticeComb>(renewal_pure_point(tiling()));
  CHECK(comb2.spacing == doctest::Approx(2.0).epsilon(1e-15));
  // Same law given as doubles goes through rational reconstruction.
  const auto approx = WaitingDistribution::discrete(std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.5, 0.5}});
  CHECK(std::get<LatticeComb>(renewal_pure_point(approx)).spacing == doctest::Approx(2.0).epsilon(1e-12));
  // Incommensurate gaps: no lattice.
  const double a = 1.0 / (1.0 + std::sqrt(2.0));
  const auto irr = WaitingDistribution::discrete(std::vector<std::pair<double, double>>{{a, 0.5}, {a * (1.0 + 2.0 * std::sqrt(2.0)) , 0.5}});
  CHECK(std::holds_alternative<SingleAtomAtZero>(renewal_pure_point(irr)));
}

TEST_CASE("renewal measure") {
  const auto e = renewal_nu_density(WaitingDistribution::exponential(), 10.0);
  REQUIRE(e.density);
  for (std::size_t i = 0; i < e.density->size(); ++i) CHECK(std::abs(e.density->value(i) - 1.0) < 1e-6);
  CHECK(e.residual < 1e-8);

  const auto d = renewal_nu_density(delta_one(), 5.0);
  REQUIRE(d.atoms.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(d.atoms[i].location == doctest::Approx(i + 1.0));
    CHECK(d.atoms[i].intensity == doctest::Approx(1.0));
  }

  // Uniform(1/2, 3/2): compare with a fine direct solution of the renewal
  // equation at a few points using nu = mu + mu * mu + mu * mu * mu (x < 1.5).
  const auto u = WaitingDistribution::uniform(0.5, 1.5);
  const auto nu = renewal_nu_density(u, 1.4, 1.4 / 2800.0);
  CHECK(nu.residual < 1e-8);
  for (double x : {0.3, 0.75, 1.1, 1.3}) {
    const double mu_x = u.density(x);
    const double conv = oracle::integrate([&](double y) { return u.density(x - y) * u.density(y); }, 0.0, x);
    const auto i = static_cast<std::size_t>(std::lround(x / nu.density->grid().spacing()));
    CAPTURE(x);
    CHECK(std::abs(nu.density->value(i) - (mu_x + conv)) < 1e-3);
  }
  CHECK_THROWS_AS(renewal_nu_density(u, -1.0), Error);
}

TEST_CASE("dyson f") {
  CHECK(dyson_f(2, 0.0) == 1.0);
  CHECK(std::abs(dyson_f(2, 1.0)) < 1e-30);
  CHECK(dyson_f(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dyson_f(4, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // Direct evaluation of the defining integrals by quadrature.
  for (double r : {0.3, 1.0, 2.2, 4.5}) {
    const auto s = [](double t) { return t == 0.0 ? 1.0 : std::sin(pi * t) / (pi * t); };
    const double sp = (std::cos(pi * r) * pi * r - std::sin(pi * r)) / (pi * r * r);
    const double tail = 0.5 - oracle::integrate(s, 0.0, r);
    CHECK(dyson_f(1, r) == doctest::Approx(s(r) * s(r) + sp * tail).epsilon(1e-12));
    const double r2 = 2 * r;
    const double sp2 = (std::cos(pi * r2) * pi * r2 - std::sin(pi * r2)) / (pi * r2 * r2);
    const double part = oracle::integrate([&](double t) { return s(2 * t); }, 0.0, r);
    CHECK(dyson_f(4, r) == doctest::Approx(s(r2) * s(r2) - 2 * sp2 * part).epsilon(1e-12));
  }
  CHECK(dyson_f(2, -0.7) == dyson_f(2, 0.7));
  CHECK_THROWS_AS(dyson_f(3, 0.5), Error);
}

TEST_CASE("dyson h") {
  CHECK(dyson_h(2, 0.5) == 0.5);
  CHECK(dyson_h(2, 3.0) == 1.0);
  CHECK(dyson_h(2, -0.25) == 0.25);
  CHECK(dyson_h(1, 1.0) == doctest::Approx(0.901388).epsilon(1e-6));
  CHECK(dyson_h(1, std::nextafter(1.0, 2.0)) == doctest::Approx(2.0 - std::log(3.0)).epsilon(1e-14));
  CHECK(dyson_h(1, 0.0) == 0.0);
  CHECK(dyson_h(4, 2.0) == 1.0);
  CHECK(dyson_h(4, 2.5) == 1.0);
  CHECK(dyson_h(4, 0.0) == 0.0);
  CHECK_THROWS_AS(dyson_h(4, 1.0), Error);
  CHECK_THROWS_AS(dyson_h(4, -1.0), Error);
  // Divergence near the singular point from both sides.
  CHECK(dyson_h(4, 0.999) > 2.0);
  CHECK(dyson_h(4, 1.001) > 2.0);
  // All three tend to 1 for large |k|.
  for (int beta : {1, 2, 4}) CHECK(dyson_h(beta, 40.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ginibre") {
  CHECK(ginibre_g(0.0) == 0.0);
  CHECK(ginibre_g(std::sqrt(std::log(2.0) / pi)) == doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i < 500; ++i) CHECK(ginibre_g(0.01 * i) == ginibre_h(0.01 * i));
  CHECK(ginibre_h(10.0) == 1.0);
}

TEST_CASE("model measures") {
  const auto beta = model_measure(model::BetaBulk{2, 2048, 0.1}, Stat::Diffraction);
  CHECK(beta.atoms.size() == 1);
  CHECK(beta.density(0.5) == 0.5);
  const auto auto2 = model_measure(model::BetaBulk{2, 2048, 0.1}, Stat::Autocorrelation);
  CHECK(auto2.density(0.0) == 0.0);
  const auto ren = model_measure(model::Renewal{tiling()}, Stat::Diffraction);
  REQUIRE(ren.comb);
  CHECK(ren.comb->spacing == doctest::Approx(2.0));
  CHECK(ren.density(1.0) == doctest::Approx(0.0).scale(1.0));
  const auto ren_auto = model_measure(model::Renewal{WaitingDistribution::gamma(2.0)}, Stat::Autocorrelation, 20.0);
  // Interpolated between solver nodes.
  CHECK(ren_auto.density(0.5) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(2e-5));
  CHECK(ren_auto.density(30.0) == 1.0);
  CHECK_THROWS_AS(model_measure(model::Matern{}, Stat::Diffraction), Error);
  CHECK(parse_stat("paircorr") == Stat::Autocorrelation);
  CHECK_THROWS_AS(parse_stat("structure"), Error);
}
