#include "difflab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "difflab/linalg.hpp"

namespace difflab {

using std::numbers::pi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

Vec2 uniform_point(const Window& w, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (;;) {
    Vec2 p;
    switch (w.kind()) {
      case WindowKind::Interval:
        p = {u(rng) * w.size(), 0.0};
        break;
      case WindowKind::Square:
        p = {u(rng) * w.size(), u(rng) * w.size()};
        break;
      case WindowKind::Disk:
        p = {2.0 * u(rng) * w.size(), 2.0 * u(rng) * w.size()};
        break;
    }
    if (w.contains(p)) return p;
  }
}

}  // namespace

std::string model_name(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const model::Poisson&) { return std::string("poisson"); },
                        [](const model::MarkedPoisson&) { return std::string("marked_poisson"); },
                        [](const model::Matern&) { return std::string("matern"); },
                        [](const model::Renewal&) { return std::string("renewal"); },
                        [](const model::BetaBulk&) { return std::string("dyson"); },
                        [](const model::Ginibre&) { return std::string("ginibre"); },
                    },
                    spec);
}

double model_intensity(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const model::Poisson& m) { return m.rho; },
                        [](const model::MarkedPoisson& m) { return m.rho; },
                        // Retained fraction of type II thinning: (1 - e^{-rho V}) / (rho V), V the exclusion volume.
                        [](const model::Matern& m) {
                          const double v = m.dim == 1 ? 2.0 * m.hardcore : pi * m.hardcore * m.hardcore;
                          return m.rho * v > 0.0 ? -std::expm1(-m.rho * v) / v : m.rho;
                        },
                        [](const auto&) { return 1.0; },
                    },
                    spec);
}

int model_dimension(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const model::Poisson& m) { return m.dim; },
                        [](const model::MarkedPoisson& m) { return m.dim; },
                        [](const model::Matern& m) { return m.dim; },
                        [](const model::Ginibre&) { return 2; },
                        [](const auto&) { return 1; },
                    },
                    spec);
}

void validate(const ModelSpec& spec) {
  auto dim_ok = [](int d) { require(d == 1 || d == 2, "dim must be 1 or 2"); };
  std::visit(overloaded{
                 [&](const model::Poisson& m) {
                   require(m.rho >= 0.0 && std::isfinite(m.rho), "rho must be >= 0");
                   dim_ok(m.dim);
                 },
                 [&](const model::MarkedPoisson& m) {
                   require(m.rho >= 0.0 && std::isfinite(m.rho), "rho must be >= 0");
                   dim_ok(m.dim);
                 },
                 [&](const model::Matern& m) {
                   require(m.rho >= 0.0 && std::isfinite(m.rho), "rho must be >= 0");
                   require(m.hardcore > 0.0 && std::isfinite(m.hardcore), "hardcore distance must be > 0");
                   dim_ok(m.dim);
                 },
                 [](const model::Renewal&) {},
                 [](const model::BetaBulk& m) {
                   require(m.beta == 1 || m.beta == 2 || m.beta == 4, "beta must be 1, 2 or 4");
                   require(m.n >= 1, "n must be >= 1");
                   require(m.keep > 0.0 && m.keep <= 1.0, "keep fraction must lie in (0, 1]");
                 },
                 [](const model::Ginibre& m) {
                   require(m.n >= 1, "n must be >= 1");
                   require(m.keep > 0.0 && m.keep <= 1.0, "keep fraction must lie in (0, 1]");
                 },
             },
             spec);
}

PointSet sample_poisson(double rho, const Window& w, const SeedSpec& seed) {
  require(rho >= 0.0 && std::isfinite(rho), "Poisson intensity must be >= 0");
  auto rng = make_rng(seed, kStreamPositions);
  const double mean = rho * w.volume();
  std::size_t count = 0;
  if (mean > 0.0) count = static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
  std::vector<Vec2> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(uniform_point(w, rng));
  return PointSet(w, std::move(pts));
}

WeightedPointSet mark_pm1(const PointSet& p, const SeedSpec& seed) {
  auto rng = make_rng(seed, kStreamMarks);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> weights(p.size());
  for (auto& w : weights) w = coin(rng) ? 1.0 : -1.0;
  return WeightedPointSet(p, std::move(weights));
}

PointSet matern2_thin(const PointSet& p, double hardcore, const SeedSpec& seed) {
  require(hardcore > 0.0 && std::isfinite(hardcore), "hard-core distance must be > 0");
  auto rng = make_rng(seed, kStreamThinning);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pts = p.points();
  const std::size_t n = pts.size();
  std::vector<double> age(n);
  for (auto& a : age) a = u(rng);
  // Ties in age are broken by index so the output is always hard-core.
  auto older = [&](std::size_t i, std::size_t j) { return age[i] < age[j] || (age[i] == age[j] && i < j); };
  const double d2 = hardcore * hardcore;
  std::vector<char> keep(n, 1);

  // Cell list with cell side = hardcore: neighbours lie in the 3^d block.
  auto cell_of = [&](double v) { return static_cast<long long>(std::floor(v / hardcore)); };
  std::unordered_map<long long, std::vector<std::size_t>> cells;
  constexpr long long stride = 1ll << 31;
  auto key = [&](long long cx, long long cy) { return cx * stride + cy; };
  for (std::size_t i = 0; i < n; ++i) cells[key(cell_of(pts[i].x), cell_of(pts[i].y))].push_back(i);

  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const long long cx = cell_of(pts[i].x);
    const long long cy = cell_of(pts[i].y);
    for (long long dx = -1; dx <= 1 && keep[i]; ++dx) {
      for (long long dy = -1; dy <= 1 && keep[i]; ++dy) {
        auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (std::size_t j : it->second) {
          if (j == i) continue;
          const double ex = pts[i].x - pts[j].x;
          const double ey = pts[i].y - pts[j].y;
          if (ex * ex + ey * ey < d2 && older(j, i)) {
            keep[i] = 0;
            break;
          }
        }
      }
    }
  }
  std::vector<Vec2> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) kept.push_back(pts[i]);
  }
  return PointSet(p.window(), std::move(kept));
}

PointSet sample_renewal(const WaitingDistribution& mu, const Window& w, const SeedSpec& seed) {
  require(w.dimension() == 1, "renewal process needs a 1D window");
  auto rng = make_rng(seed, kStreamPositions);
  const double half = 0.5 * w.size();
  const double burn_in = 50.0 * std::max(1.0, mu.stddev() * 10.0);
  // The extra uniform offset randomises the phase, which burn-in alone cannot
  // do for lattice-supported waiting times.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = -(half + burn_in) - u(rng) * mu.mean();
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(w.size() * 1.1) + 16);
  for (;;) {
    x += mu.sample(rng);
    if (x >= half) break;
    if (x > -half) xs.push_back(x);
  }
  return PointSet::on_line(w, xs);
}

Window beta_bulk_window(int n, double keep) {
  // Semicircle of radius sqrt(2N/pi); keep |x| < keep * radius; rescale by sqrt(2N/pi).
  const double radius = std::sqrt(2.0 * n / pi);
  return Window::interval(2.0 * keep * radius * radius);
}

Window ginibre_window(int n, double keep) { return Window::disk(keep * std::sqrt(n / pi)); }

PointSet sample_beta_bulk(int beta, int n, double keep, const SeedSpec& seed) {
  validate(model::BetaBulk{beta, n, keep});
  auto rng = make_rng(seed, kStreamPositions);
  // Tridiagonal beta-Hermite model: diag N(0, 2), off-diagonal chi_{beta (N - j)},
  // j = 1..N-1, all scaled by 1/sqrt(2). Its spectrum fills [-sqrt(2 beta N), sqrt(2 beta N)].
  SymTridiag m;
  m.diag.resize(static_cast<std::size_t>(n));
  m.offdiag.resize(static_cast<std::size_t>(n - 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& d : m.diag) d = normal(rng);
  for (int j = 1; j < n; ++j) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(beta) * (n - j));
    m.offdiag[static_cast<std::size_t>(j - 1)] = std::sqrt(chi2(rng) / 2.0);
  }
  const auto eig = symtridiag_eigenvalues(m);

  const double radius = std::sqrt(2.0 * n / pi);
  const double to_semicircle = radius / std::sqrt(2.0 * beta * n);
  const Window w = beta_bulk_window(n, keep);
  std::vector<double> xs;
  for (double lambda : eig) {
    const double t = lambda * to_semicircle;
    if (std::abs(t) >= keep * radius) continue;
    const double x = t * radius;
    if (w.contains({x, 0.0})) xs.push_back(x);
  }
  return PointSet::on_line(w, xs);
}

PointSet sample_ginibre(int n, double keep, const SeedSpec& seed) {
  validate(model::Ginibre{n, keep});
  auto rng = make_rng(seed, kStreamPositions);
  // E|z|^2 = 1/pi puts the circular law on radius sqrt(N/pi), i.e. density 1.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 / pi));
  ComplexMatrix a(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = {re, im};
    }
  }
  const auto eig = complex_eigenvalues(a);
  const Window w = ginibre_window(n, keep);
  std::vector<Vec2> pts;
  for (const auto& z : eig) {
    const Vec2 p{z.real(), z.imag()};
    if (w.contains(p)) pts.push_back(p);
  }
  // Eigenvalue order from the QR sweep is not meaningful; sort for stable output.
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  return PointSet(w, std::move(pts));
}

AnyPointSet sample_model(const ModelSpec& spec, const std::optional<Window>& window, const SeedSpec& seed) {
  validate(spec);
  auto need_window = [&](int dim) -> const Window& {
    if (!window) fail(ErrorCode::InvalidArgument, "model '" + model_name(spec) + "' needs an observation window");
    require(window->dimension() == dim, "window dimension does not match the model");
    return *window;
  };
  return std::visit(overloaded{
                        [&](const model::Poisson& m) -> AnyPointSet {
                          return sample_poisson(m.rho, need_window(m.dim), seed);
                        },
                        [&](const model::MarkedPoisson& m) -> AnyPointSet {
                          return mark_pm1(sample_poisson(m.rho, need_window(m.dim), seed), seed);
                        },
                        [&](const model::Matern& m) -> AnyPointSet {
                          return matern2_thin(sample_poisson(m.rho, need_window(m.dim), seed), m.hardcore, seed);
                        },
                        [&](const model::Renewal& m) -> AnyPointSet {
                          return sample_renewal(m.waiting, need_window(1), seed);
                        },
                        [&](const model::BetaBulk& m) -> AnyPointSet {
                          return sample_beta_bulk(m.beta, m.n, m.keep, seed);
                        },
                        [&](const model::Ginibre& m) -> AnyPointSet { return sample_ginibre(m.n, m.keep, seed); },
                    },
                    spec);
}

}  // namespace difflab
