#pragma once

// Empirical pair correlation and periodogram estimates from a single
// realisation, plus replica averaging.

#include <cstddef>
#include <span>
#include <vector>

#include "difflab/core.hpp"

namespace difflab {

inline constexpr std::size_t kDefaultBins = 256;
inline constexpr std::size_t kDefaultGridPoints = 512;

/// Histogram estimate of g(r) on bins of width r_max / bins; abscissae are the
/// bin centres. Pairs are weighted with the translation edge correction
/// 1 / |W cap (W + u)|, which is 1 / (L - r) on the line.
GridFunction pair_correlation_1d(const PointSet& p, double r_max, std::size_t bins = kDefaultBins);
GridFunction pair_correlation_radial_2d(const PointSet& p, double r_max, std::size_t bins = kDefaultBins);

/// Grid of bin centres used by the pair-correlation estimators.
Grid pair_correlation_grid(double r_max, std::size_t bins);

struct PeriodogramOptions {
  /// Width of the wavenumber band averaged around each grid point. Negative
  /// selects the grid spacing (adjacent bands tile the grid); zero evaluates
  /// the periodogram at the grid point only. Inside a band the periodogram is
  /// sampled at the natural resolution 1 / (window diameter).
  double band = -1.0;
  /// Subtract the Fourier transform of the window times the empirical mean
  /// weight density, which removes leakage from the delta_0 peak.
  bool remove_mean = false;
  /// Cosine-squared taper across the window (normalised by its L2 mass).
  bool taper = false;
  /// Directions averaged per radius in 2D.
  int directions = 64;
};

/// I(k) = |sum_j w_j exp(-2 pi i k x_j)|^2 / L, band-averaged per options.
GridFunction periodogram_1d(const PointSet& p, const Grid& k_grid, const PeriodogramOptions& options = {});
GridFunction periodogram_1d(const WeightedPointSet& p, const Grid& k_grid, const PeriodogramOptions& options = {});
/// Radially averaged I(k) for planar sets.
GridFunction periodogram_radial_2d(const PointSet& p, const Grid& k_grid, const PeriodogramOptions& options = {});
GridFunction periodogram_radial_2d(const WeightedPointSet& p, const Grid& k_grid,
                                   const PeriodogramOptions& options = {});

/// Pointwise mean; standard error = sample std / sqrt(#runs). Throws
/// GridMismatch if grids differ.
GridFunction average_replicas(std::span<const GridFunction> runs);

/// Grid points whose value exceeds `factor` times the median over the
/// +-half_width neighbourhood and the absolute `floor`.
std::vector<double> bragg_candidates(const GridFunction& g, double factor = 10.0, double half_width = 0.1,
                                     double floor = 1e-3);

}  // namespace difflab
