#pragma once

// Estimate-vs-theory comparison with exclusion bands.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "difflab/core.hpp"

namespace difflab {

/// Open interval (lo, hi) of abscissae left out of a comparison.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Band&, const Band&) = default;
};

/// How the theory curve is turned into a per-point reference value.
enum class TheoryAveraging {
  Point,   // theory(x)
  Linear,  // mean of theory over the bin [x - w/2, x + w/2]
  Radial,  // r-weighted mean over the bin (annulus average)
};

struct CompareOptions {
  /// Bin width belonging to each grid point; 0 means point evaluations. With a
  /// positive width a point is excluded when its bin overlaps a band.
  double bin_width = 0.0;
  TheoryAveraging averaging = TheoryAveraging::Point;
  /// Only abscissae inside [range_lo, range_hi] take part when set.
  std::optional<Band> range;
};

struct ComparisonMetrics {
  double sup_dev = 0.0;
  double l2_dev = 0.0;  // root mean square deviation
  std::optional<double> max_abs_z;
  friend bool operator==(const ComparisonMetrics&, const ComparisonMetrics&) = default;
};

struct ComparisonReport {
  std::string model;
  std::string stat;
  Grid grid;
  std::vector<Band> excluded;
  ComparisonMetrics metrics;
  double tol_sup = 0.05;
  double z_cap = 4.0;
  int replicas = 1;
  std::uint64_t seed = 0;
  bool pass = false;
  double runtime_s = 0.0;
  std::size_t points_compared = 0;
  std::vector<double> bragg_candidates;
  /// Per-point reference values used (NaN where excluded).
  std::vector<double> reference;
};

/// Metrics over the non-excluded points; z-scores use the standard errors of
/// `est` where they exceed rounding level (1e-12 relative). pass <=> sup_dev <= tol_sup and
/// max_abs_z <= z_cap (when any z-score exists). Throws AllPointsExcluded.
ComparisonReport compare(const GridFunction& est, const std::function<double(double)>& theory,
                         std::span<const Band> exclude, double tol_sup, double z_cap,
                         const CompareOptions& options = {});

/// Bin mean of f over [a, b]; Radial weights the integrand by r.
double bin_average(const std::function<double(double)>& f, double a, double b, TheoryAveraging mode);

/// Report as JSON with keys model, stat, grid, excluded, metrics, tolerances,
/// replicas, seed, pass, runtime_s, bragg_candidates, points_compared.
std::string report_json(const ComparisonReport& report, bool include_runtime = true);

}  // namespace difflab
