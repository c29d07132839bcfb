#include "difflab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace difflab {

using std::numbers::pi;

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

// |W cap (W + u)| for a centred window.
double set_covariance(const Window& w, double ux, double uy) {
  switch (w.kind()) {
    case WindowKind::Interval:
      return std::max(0.0, w.size() - std::abs(ux));
    case WindowKind::Square:
      return std::max(0.0, w.size() - std::abs(ux)) * std::max(0.0, w.size() - std::abs(uy));
    case WindowKind::Disk: {
      const double r = w.size();
      const double d = std::hypot(ux, uy);
      if (d >= 2.0 * r) return 0.0;
      return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
    }
  }
  return 0.0;
}

}  // namespace

Grid pair_correlation_grid(double r_max, std::size_t bins) {
  require(r_max > 0.0 && std::isfinite(r_max), ErrorCode::InvalidArgument, "r_max must be positive");
  require(bins >= 1, ErrorCode::InvalidArgument, "need at least one bin");
  const double width = r_max / static_cast<double>(bins);
  if (bins == 1) return Grid::make(0.5 * r_max, 0.5 * r_max, 1);
  return Grid::make(0.5 * width, r_max - 0.5 * width, bins);
}

GridFunction pair_correlation_1d(const PointSet& p, double r_max, std::size_t bins) {
  require(p.dimension() == 1, ErrorCode::InvalidArgument, "pair_correlation_1d needs a 1D point set");
  const Grid grid = pair_correlation_grid(r_max, bins);
  const double length = p.window().size();
  require(r_max < 0.5 * length, ErrorCode::InvalidArgument, "r_max must be below half the window length");
  require(p.size() >= 2, ErrorCode::TooFewPoints, "pair correlation needs at least 2 points");

  auto xs = p.xs();
  std::sort(xs.begin(), xs.end());
  const double width = r_max / static_cast<double>(bins);
  std::vector<double> acc(bins, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double d = xs[j] - xs[i];
      if (d >= r_max) break;
      const auto b = std::min(bins - 1, static_cast<std::size_t>(d / width));
      acc[b] += 1.0 / (length - d);
    }
  }
  // Each unordered pair stands for two ordered pairs; the bin covers
  // {u : |u| in bin}, of length 2 * width.
  const double rho = point_density(p);
  std::vector<double> g(bins);
  for (std::size_t b = 0; b < bins; ++b) g[b] = acc[b] / (rho * rho * width);
  return GridFunction(grid, std::move(g));
}

GridFunction pair_correlation_radial_2d(const PointSet& p, double r_max, std::size_t bins) {
  require(p.dimension() == 2, ErrorCode::InvalidArgument, "pair_correlation_radial_2d needs a 2D point set");
  const Grid grid = pair_correlation_grid(r_max, bins);
  require(r_max < p.window().inradius(), ErrorCode::InvalidArgument, "r_max must be below the window inradius");
  require(p.size() >= 2, ErrorCode::TooFewPoints, "pair correlation needs at least 2 points");

  std::vector<Vec2> pts(p.points().begin(), p.points().end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x; });
  const double width = r_max / static_cast<double>(bins);
  const double r2max = r_max * r_max;
  std::vector<double> acc(bins, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[j].x - pts[i].x;
      if (dx >= r_max) break;
      const double dy = pts[j].y - pts[i].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 >= r2max) continue;
      const double d = std::sqrt(d2);
      const auto b = std::min(bins - 1, static_cast<std::size_t>(d / width));
      acc[b] += 2.0 / set_covariance(p.window(), dx, dy);
    }
  }
  const double rho = point_density(p);
  std::vector<double> g(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double r1 = width * static_cast<double>(b);
    const double r2 = r1 + width;
    g[b] = acc[b] / (rho * rho * pi * (r2 * r2 - r1 * r1));
  }
  return GridFunction(grid, std::move(g));
}

namespace {

// Fourier transform of the window indicator at wavevector (kx, ky).
double window_transform(const Window& w, double kx, double ky) {
  auto sinc_len = [](double k, double len) {
    const double x = pi * k * len;
    return std::abs(x) < 1e-8 ? len : std::sin(x) / (pi * k);
  };
  switch (w.kind()) {
    case WindowKind::Interval:
      return sinc_len(kx, w.size());
    case WindowKind::Square:
      return sinc_len(kx, w.size()) * sinc_len(ky, w.size());
    case WindowKind::Disk: {
      const double r = w.size();
      const double x = 2.0 * pi * std::hypot(kx, ky) * r;
      const double area = pi * r * r;
      if (x < 1e-8) return area;
      return area * 2.0 * std::cyl_bessel_j(1.0, x) / x;
    }
  }
  return 0.0;
}

double taper_value(const Window& w, Vec2 p) {
  auto c2 = [](double t) {
    const double c = std::cos(t);
    return c * c;
  };
  switch (w.kind()) {
    case WindowKind::Interval:
      return c2(pi * p.x / w.size());
    case WindowKind::Square:
      return c2(pi * p.x / w.size()) * c2(pi * p.y / w.size());
    case WindowKind::Disk:
      return c2(0.5 * pi * std::hypot(p.x, p.y) / w.size());
  }
  return 1.0;
}

// int_W taper^2.
double taper_mass(const Window& w) {
  switch (w.kind()) {
    case WindowKind::Interval:
      return 0.375 * w.size();
    case WindowKind::Square:
      return 0.375 * w.size() * 0.375 * w.size();
    case WindowKind::Disk: {
      // 2 pi int_0^R cos^4(pi r / 2R) r dr by composite Simpson.
      const int n = 2000;
      const double r = w.size();
      const double h = r / n;
      double s = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double x = h * i;
        const double c = std::cos(0.5 * pi * x / r);
        const double f = c * c * c * c * x;
        s += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
      }
      return 2.0 * pi * s * h / 3.0;
    }
  }
  return w.volume();
}

struct Sampler {
  std::size_t count;  // sub-samples per band
  double step;        // spacing between sub-samples
};

Sampler band_sampler(const Grid& grid, const PeriodogramOptions& o, double diameter) {
  const double band = o.band < 0.0 ? grid.spacing() : o.band;
  if (band <= 0.0) return {1, 0.0};
  const auto count = static_cast<std::size_t>(std::max(1.0, std::round(band * diameter)));
  return {count, band / static_cast<double>(count)};
}

// Projected coordinates, weights and taper for a weighted set.
struct Prepared {
  std::vector<double> weight;  // w_j * taper_j
  double norm = 1.0;           // divisor of |S|^2
  double mean_weight_density = 0.0;
};

Prepared prepare(const PointSet& p, std::span<const double> weights, const PeriodogramOptions& o) {
  require(!(o.taper && o.remove_mean), ErrorCode::InvalidArgument, "taper and remove_mean cannot be combined");
  Prepared out;
  const auto pts = p.points();
  out.weight.resize(pts.size());
  double wsum = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    wsum += w;
    out.weight[j] = o.taper ? w * taper_value(p.window(), pts[j]) : w;
  }
  out.norm = o.taper ? taper_mass(p.window()) : p.window().volume();
  out.mean_weight_density = wsum / p.window().volume();
  return out;
}

// Accumulates sum_s |S(k0 + s * dk) - mean_term|^2 along one direction, where
// proj_j = u . x_j. Uses a phasor recurrence: one complex multiply per point
// and sub-sample, re-seeded from sincos every kResync steps.
double band_power(std::span<const double> proj, std::span<const double> weight, double k0, const Sampler& s,
                  const std::function<double(double)>* mean_term) {
  constexpr std::size_t kResync = 256;
  const std::size_t n = proj.size();
  std::vector<double> re(n), im(n), sre(n), sim(n);
  double total = 0.0;
  for (std::size_t start = 0; start < s.count; start += kResync) {
    const std::size_t stop = std::min(s.count, start + kResync);
    const double k_start = k0 + s.step * static_cast<double>(start);
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = -2.0 * pi * k_start * proj[j];
      re[j] = weight[j] * std::cos(ph);
      im[j] = weight[j] * std::sin(ph);
      const double st = -2.0 * pi * s.step * proj[j];
      sre[j] = std::cos(st);
      sim[j] = std::sin(st);
    }
    for (std::size_t sub = start; sub < stop; ++sub) {
      // Independent partial sums keep the adds off one dependency chain.
      double pr[4] = {0.0, 0.0, 0.0, 0.0}, pi_[4] = {0.0, 0.0, 0.0, 0.0};
      double* __restrict r = re.data();
      double* __restrict m = im.data();
      const double* __restrict cr = sre.data();
      const double* __restrict ci = sim.data();
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        for (std::size_t u = 0; u < 4; ++u) {
          const double a = r[j + u], b = m[j + u];
          pr[u] += a;
          pi_[u] += b;
          r[j + u] = a * cr[j + u] - b * ci[j + u];
          m[j + u] = a * ci[j + u] + b * cr[j + u];
        }
      }
      for (; j < n; ++j) {
        const double a = r[j], b = m[j];
        pr[0] += a;
        pi_[0] += b;
        r[j] = a * cr[j] - b * ci[j];
        m[j] = a * ci[j] + b * cr[j];
      }
      double sr = (pr[0] + pr[1]) + (pr[2] + pr[3]);
      const double si = (pi_[0] + pi_[1]) + (pi_[2] + pi_[3]);
      if (mean_term) sr -= (*mean_term)(k0 + s.step * static_cast<double>(sub));
      total += sr * sr + si * si;
    }
  }
  return total;
}

GridFunction periodogram_line(const PointSet& p, std::span<const double> weights, const Grid& k_grid,
                              const PeriodogramOptions& o) {
  require(p.dimension() == 1, ErrorCode::InvalidArgument, "periodogram_1d needs a 1D point set");
  const auto prep = prepare(p, weights, o);
  const auto xs = p.xs();
  const Sampler s = band_sampler(k_grid, o, p.window().diameter());
  const Window w = p.window();
  const double rho_w = prep.mean_weight_density;
  // Window transform is real for centred windows, so only the real part shifts.
  const std::function<double(double)> mean_term = [&](double k) { return rho_w * window_transform(w, k, 0.0); };
  std::vector<double> values(k_grid.n);
  for (std::size_t i = 0; i < k_grid.n; ++i) {
    const double k0 = k_grid.at(i) - 0.5 * s.step * static_cast<double>(s.count - 1);
    const double power = band_power(xs, prep.weight, k0, s, o.remove_mean ? &mean_term : nullptr);
    values[i] = power / (prep.norm * static_cast<double>(s.count));
  }
  return GridFunction(k_grid, std::move(values));
}

GridFunction periodogram_plane(const PointSet& p, std::span<const double> weights, const Grid& k_grid,
                               const PeriodogramOptions& o) {
  require(p.dimension() == 2, ErrorCode::InvalidArgument, "periodogram_radial_2d needs a 2D point set");
  require(o.directions >= 1, ErrorCode::InvalidArgument, "need at least one direction");
  const auto prep = prepare(p, weights, o);
  const Sampler s = band_sampler(k_grid, o, p.window().diameter());
  const auto pts = p.points();
  const Window w = p.window();
  const double rho_w = prep.mean_weight_density;
  std::vector<double> proj(pts.size());
  std::vector<double> values(k_grid.n, 0.0);
  // Directions cover [0, pi); I(-k) = I(k) for real weights.
  for (int d = 0; d < o.directions; ++d) {
    const double theta = pi * (d + 0.5) / o.directions;
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    for (std::size_t j = 0; j < pts.size(); ++j) proj[j] = ux * pts[j].x + uy * pts[j].y;
    const std::function<double(double)> mean_term = [&](double k) {
      return rho_w * window_transform(w, k * ux, k * uy);
    };
    for (std::size_t i = 0; i < k_grid.n; ++i) {
      const double k0 = k_grid.at(i) - 0.5 * s.step * static_cast<double>(s.count - 1);
      values[i] += band_power(proj, prep.weight, k0, s, o.remove_mean ? &mean_term : nullptr);
    }
  }
  const double samples = static_cast<double>(s.count) * o.directions;
  for (auto& v : values) v /= prep.norm * samples;
  return GridFunction(k_grid, std::move(values));
}

}  // namespace

GridFunction periodogram_1d(const PointSet& p, const Grid& k_grid, const PeriodogramOptions& options) {
  return periodogram_line(p, {}, k_grid, options);
}

GridFunction periodogram_1d(const WeightedPointSet& p, const Grid& k_grid, const PeriodogramOptions& options) {
  return periodogram_line(p.base(), p.weights(), k_grid, options);
}

GridFunction periodogram_radial_2d(const PointSet& p, const Grid& k_grid, const PeriodogramOptions& options) {
  return periodogram_plane(p, {}, k_grid, options);
}

GridFunction periodogram_radial_2d(const WeightedPointSet& p, const Grid& k_grid,
                                   const PeriodogramOptions& options) {
  return periodogram_plane(p.base(), p.weights(), k_grid, options);
}

GridFunction average_replicas(std::span<const GridFunction> runs) {
  require(!runs.empty(), ErrorCode::InvalidArgument, "nothing to average");
  const Grid grid = runs.front().grid();
  int replicas = 0;
  for (const auto& r : runs) {
    require(r.grid() == grid, ErrorCode::GridMismatch, "replica grids differ");
    replicas += r.n_replicas();
  }
  if (runs.size() == 1) {
    const auto v = runs.front().values();
    return GridFunction(grid, std::vector<double>(v.begin(), v.end()), std::nullopt, replicas);
  }
  const double n = static_cast<double>(runs.size());
  std::vector<double> mean(grid.n, 0.0), se(grid.n, 0.0);
  for (std::size_t i = 0; i < grid.n; ++i) {
    double s = 0.0;
    for (const auto& r : runs) s += r.value(i);
    mean[i] = s / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.value(i) - mean[i]) * (r.value(i) - mean[i]);
    se[i] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return GridFunction(grid, std::move(mean), std::move(se), replicas);
}

std::vector<double> bragg_candidates(const GridFunction& g, double factor, double half_width, double floor) {
  std::vector<double> out;
  std::vector<double> window;
  for (std::size_t i = 0; i < g.size(); ++i) {
    window.clear();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (std::abs(g.abscissa(j) - g.abscissa(i)) <= half_width * (1.0 + 1e-9)) window.push_back(g.value(j));
    }
    // Lower median, so a peak at the grid edge with one neighbour still stands out.
    auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
    std::nth_element(window.begin(), mid, window.end());
    const double median = *mid;
    if (g.value(i) > factor * median && g.value(i) > floor) out.push_back(g.abscissa(i));
  }
  return out;
}

}  // namespace difflab
