#pragma once

// Geometric and spectral value types shared by every module.
//
// All types here are immutable after construction (no mutating members are
// exposed), so realisations and grids can be handed between worker threads
// freely.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "difflab/error.hpp"

namespace difflab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

enum class WindowKind { Interval, Disk, Square };

/// Observation window centred at the origin: an interval [-L/2, L/2] on the
/// line, or a disk of radius R / square of side L in the plane. Membership is
/// strict (open window).
class Window {
 public:
  static Window interval(double length);
  static Window disk(double radius);
  static Window square(double side);

  /// Parses "interval 100", "disk:5", "square 20" (space or colon separated).
  static Window parse(std::string_view text);

  WindowKind kind() const { return kind_; }
  int dimension() const { return kind_ == WindowKind::Interval ? 1 : 2; }
  /// L for intervals and squares, R for disks.
  double size() const { return size_; }
  double volume() const;
  /// Largest r such that the centred ball of radius r fits inside.
  double inradius() const;
  /// Extent used for Fourier resolution: L, 2R or L.
  double diameter() const;
  bool contains(Vec2 p) const;
  bool fits_inside(const Window& outer) const;
  /// "interval 100" style descriptor; Window::parse(describe()) round-trips.
  std::string describe() const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Window(WindowKind kind, double size) : kind_(kind), size_(size) {}
  WindowKind kind_;
  double size_;
};

class PointSet {
 public:
  /// Throws InvalidArgument if a point lies outside the window or is not
  /// finite. For 1D windows the y coordinates must be zero.
  PointSet(Window window, std::vector<Vec2> points);
  static PointSet on_line(Window window, const std::vector<double>& xs);

  const Window& window() const { return window_; }
  int dimension() const { return window_.dimension(); }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Vec2> points() const { return points_; }
  std::vector<double> xs() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  Window window_;
  std::vector<Vec2> points_;
};

/// Dirac comb sum_x w_x delta_x over a realisation.
class WeightedPointSet {
 public:
  WeightedPointSet(PointSet base, std::vector<double> weights);

  const PointSet& base() const { return base_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return base_.size(); }

  friend bool operator==(const WeightedPointSet&, const WeightedPointSet&) = default;

 private:
  PointSet base_;
  std::vector<double> weights_;
};

double window_volume(const Window& w);
double point_density(const PointSet& p);
/// Points of p strictly inside w; the result carries w as its window.
PointSet restrict_to(const PointSet& p, const Window& w);
WeightedPointSet restrict_to(const WeightedPointSet& p, const Window& w);

/// Uniform grid min:max:n with inclusive endpoints.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 1;

  static Grid make(double min, double max, std::size_t n);
  static Grid parse(std::string_view text);
  double spacing() const { return n > 1 ? (max - min) / static_cast<double>(n - 1) : 0.0; }
  double at(std::size_t i) const;
  std::vector<double> abscissae() const;
  std::string describe() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values,
               std::optional<std::vector<double>> standard_errors = std::nullopt,
               int n_replicas = 1);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double abscissa(std::size_t i) const { return grid_.at(i); }
  std::span<const double> values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  bool has_standard_errors() const { return standard_errors_.has_value(); }
  std::span<const double> standard_errors() const;
  int n_replicas() const { return n_replicas_; }

 private:
  Grid grid_;
  std::vector<double> values_;
  std::optional<std::vector<double>> standard_errors_;
  int n_replicas_;
};

struct Atom {
  double location = 0.0;  // wavenumber / distance; radial for planar models
  double intensity = 0.0;
};

/// Dirac comb intensity * sum_{n in Z} delta_{n * spacing}.
struct LatticeComb {
  double spacing = 1.0;
  double intensity = 1.0;
};

/// Pure point part plus absolutely continuous density. No singular
/// continuous component is represented.
struct SpectralMeasure {
  std::vector<Atom> atoms;
  std::optional<LatticeComb> comb;
  std::function<double(double)> ac_density;
  std::string label;

  double density(double t) const { return ac_density ? ac_density(t) : 0.0; }
  bool has_ac_part() const { return static_cast<bool>(ac_density); }
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;
};

using Rng = std::mt19937_64;

/// Counter-keyed splitmix64 derivation; a pure function of its arguments.
std::uint64_t derive_seed(const SeedSpec& seed, std::uint64_t stream = 0);
Rng make_rng(const SeedSpec& seed, std::uint64_t stream = 0);

}  // namespace difflab
