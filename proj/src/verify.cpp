#include "difflab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace difflab {

double bin_average(const std::function<double(double)>& f, double a, double b, TheoryAveraging mode) {
  if (mode == TheoryAveraging::Point || b <= a) return f(0.5 * (a + b));
  // Composite Simpson; the theory curves are at worst kinked inside a bin.
  constexpr int kPanels = 512;
  const double h = (b - a) / kPanels;
  const bool radial = mode == TheoryAveraging::Radial;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double x = a + h * i;
    const double c = (i == 0 || i == kPanels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double w = radial ? x : 1.0;
    num += c * w * f(x);
    den += c * w;
  }
  return num / den;
}

constexpr double kStderrFloor = 1e-12;

ComparisonReport compare(const GridFunction& est, const std::function<double(double)>& theory,
                         std::span<const Band> exclude, double tol_sup, double z_cap,
                         const CompareOptions& options) {
  if (!(tol_sup >= 0.0) || !(z_cap > 0.0)) fail(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (options.bin_width < 0.0) fail(ErrorCode::InvalidArgument, "bin width must be nonnegative");
  ComparisonReport r;
  r.grid = est.grid();
  r.excluded.assign(exclude.begin(), exclude.end());
  r.tol_sup = tol_sup;
  r.z_cap = z_cap;
  r.replicas = est.n_replicas();
  r.reference.assign(est.size(), std::numeric_limits<double>::quiet_NaN());

  const double half = 0.5 * options.bin_width;
  const auto se = est.has_standard_errors() ? est.standard_errors() : std::span<const double>{};
  double sum_sq = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double x = est.abscissa(i);
    if (options.range && (x < options.range->lo || x > options.range->hi)) continue;
    bool skip = false;
    for (const auto& b : exclude) {
      if (half > 0.0 ? (x + half > b.lo && x - half < b.hi) : (x > b.lo && x < b.hi)) {
        skip = true;
        break;
      }
    }
    if (skip) continue;
    const double ref = half > 0.0 ? bin_average(theory, x - half, x + half, options.averaging) : theory(x);
    if (!std::isfinite(ref)) fail(ErrorCode::InvalidArgument, "theory is not finite at " + std::to_string(x));
    r.reference[i] = ref;
    const double dev = est.value(i) - ref;
    r.metrics.sup_dev = std::max(r.metrics.sup_dev, std::abs(dev));
    sum_sq += dev * dev;
    ++used;
    // Standard errors at rounding level (replicas identical up to a shift) carry no noise information.
    if (!se.empty() && se[i] > kStderrFloor * std::max({1.0, std::abs(est.value(i)), std::abs(ref)})) {
      const double z = std::abs(dev) / se[i];
      r.metrics.max_abs_z = std::max(r.metrics.max_abs_z.value_or(0.0), z);
    }
  }
  if (used == 0) fail(ErrorCode::AllPointsExcluded, "every grid point is excluded");
  r.points_compared = used;
  r.metrics.l2_dev = std::sqrt(sum_sq / static_cast<double>(used));
  r.pass = r.metrics.sup_dev <= tol_sup && (!r.metrics.max_abs_z || *r.metrics.max_abs_z <= z_cap);
  return r;
}

std::string report_json(const ComparisonReport& r, bool include_runtime) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["model"] = r.model;
  j["stat"] = r.stat;
  j["grid"] = {{"min", r.grid.min}, {"max", r.grid.max}, {"n", r.grid.n}};
  auto bands = ordered_json::array();
  for (const auto& b : r.excluded) bands.push_back({b.lo, b.hi});
  j["excluded"] = bands;
  ordered_json m;
  m["sup_dev"] = r.metrics.sup_dev;
  m["l2_dev"] = r.metrics.l2_dev;
  m["max_abs_z"] = r.metrics.max_abs_z ? ordered_json(*r.metrics.max_abs_z) : ordered_json(nullptr);
  j["metrics"] = m;
  j["tolerances"] = {{"sup", r.tol_sup}, {"z", r.z_cap}};
  j["replicas"] = r.replicas;
  j["seed"] = r.seed;
  j["pass"] = r.pass;
  j["runtime_s"] = include_runtime ? r.runtime_s : 0.0;
  j["points_compared"] = r.points_compared;
  j["bragg_candidates"] = r.bragg_candidates;
  return j.dump(2) + "\n";
}

}  // namespace difflab
