#include "difflab/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace difflab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::AtomLocation: return "AtomLocation";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::AllPointsExcluded: return "AllPointsExcluded";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_positive_size(double size, const char* what) {
  if (!(size > 0.0) || !std::isfinite(size)) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

double parse_double(std::string_view s, const char* context) {
  double v = 0.0;
  auto first = s.data();
  auto last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    fail(ErrorCode::InvalidArgument, std::string("cannot parse number '") + std::string(s) + "' in " + context);
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Window Window::interval(double length) {
  require_positive_size(length, "interval length");
  return Window(WindowKind::Interval, length);
}

Window Window::disk(double radius) {
  require_positive_size(radius, "disk radius");
  return Window(WindowKind::Disk, radius);
}

Window Window::square(double side) {
  require_positive_size(side, "square side");
  return Window(WindowKind::Square, side);
}

Window Window::parse(std::string_view text) {
  text = trim(text);
  auto sep = text.find_first_of(" :");
  if (sep == std::string_view::npos) {
    fail(ErrorCode::InvalidArgument, "window must look like '<interval|disk|square> <size>', got '" +
                                         std::string(text) + "'");
  }
  auto kind = trim(text.substr(0, sep));
  double size = parse_double(trim(text.substr(sep + 1)), "window size");
  if (kind == "interval") return interval(size);
  if (kind == "disk") return disk(size);
  if (kind == "square") return square(size);
  fail(ErrorCode::InvalidArgument, "unknown window kind '" + std::string(kind) + "'");
}

double Window::volume() const {
  switch (kind_) {
    case WindowKind::Interval: return size_;
    case WindowKind::Disk: return std::numbers::pi * size_ * size_;
    case WindowKind::Square: return size_ * size_;
  }
  return 0.0;
}

double Window::inradius() const { return kind_ == WindowKind::Disk ? size_ : 0.5 * size_; }

double Window::diameter() const { return kind_ == WindowKind::Disk ? 2.0 * size_ : size_; }

bool Window::contains(Vec2 p) const {
  switch (kind_) {
    case WindowKind::Interval: return std::abs(p.x) < 0.5 * size_ && p.y == 0.0;
    case WindowKind::Disk: return p.x * p.x + p.y * p.y < size_ * size_;
    case WindowKind::Square: return std::abs(p.x) < 0.5 * size_ && std::abs(p.y) < 0.5 * size_;
  }
  return false;
}

bool Window::fits_inside(const Window& outer) const {
  if (dimension() != outer.dimension()) return false;
  // Compare circumradius of *this against the inradius of outer where shapes differ.
  switch (kind_) {
    case WindowKind::Interval: return size_ <= outer.size_;
    case WindowKind::Disk: return size_ <= outer.inradius();
    case WindowKind::Square:
      if (outer.kind_ == WindowKind::Square) return size_ <= outer.size_;
      return 0.5 * size_ * std::numbers::sqrt2 <= outer.size_;
  }
  return false;
}

std::string Window::describe() const {
  const char* name = kind_ == WindowKind::Interval ? "interval" : kind_ == WindowKind::Disk ? "disk" : "square";
  return std::string(name) + " " + format_double(size_);
}

PointSet::PointSet(Window window, std::vector<Vec2> points) : window_(window), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::InvalidArgument, "point coordinates must be finite");
    }
    if (!window_.contains(p)) {
      fail(ErrorCode::InvalidArgument, "point (" + format_double(p.x) + ", " + format_double(p.y) +
                                           ") lies outside window " + window_.describe());
    }
  }
}

PointSet PointSet::on_line(Window window, const std::vector<double>& xs) {
  std::vector<Vec2> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, 0.0});
  return PointSet(window, std::move(pts));
}

std::vector<double> PointSet::xs() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.x);
  return out;
}

WeightedPointSet::WeightedPointSet(PointSet base, std::vector<double> weights)
    : base_(std::move(base)), weights_(std::move(weights)) {
  if (weights_.size() != base_.size()) {
    fail(ErrorCode::InvalidArgument, "weight count " + std::to_string(weights_.size()) +
                                         " does not match point count " + std::to_string(base_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) fail(ErrorCode::InvalidArgument, "weights must be finite");
  }
}

double window_volume(const Window& w) { return w.volume(); }

double point_density(const PointSet& p) { return static_cast<double>(p.size()) / p.window().volume(); }

PointSet restrict_to(const PointSet& p, const Window& w) {
  if (w.dimension() != p.dimension()) {
    fail(ErrorCode::InvalidArgument, "cannot restrict a " + std::to_string(p.dimension()) +
                                         "D point set to a " + std::to_string(w.dimension()) + "D window");
  }
  if (!w.fits_inside(p.window())) {
    fail(ErrorCode::WindowTooLarge, "window " + w.describe() + " exceeds " + p.window().describe());
  }
  std::vector<Vec2> kept;
  for (const auto& pt : p.points()) {
    if (w.contains(pt)) kept.push_back(pt);
  }
  return PointSet(w, std::move(kept));
}

WeightedPointSet restrict_to(const WeightedPointSet& p, const Window& w) {
  const auto restricted = restrict_to(p.base(), w);
  std::vector<double> weights;
  weights.reserve(restricted.size());
  auto pts = p.base().points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w.contains(pts[i])) weights.push_back(p.weights()[i]);
  }
  return WeightedPointSet(restricted, std::move(weights));
}

Grid Grid::make(double min, double max, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (!std::isfinite(min) || !std::isfinite(max)) fail(ErrorCode::InvalidArgument, "grid bounds must be finite");
  if (n == 1 && min != max) fail(ErrorCode::InvalidArgument, "a one-point grid needs min == max");
  if (n > 1 && !(max > min)) fail(ErrorCode::InvalidArgument, "grid needs max > min");
  return Grid{min, max, n};
}

Grid Grid::parse(std::string_view text) {
  text = trim(text);
  auto c1 = text.find(':');
  auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    fail(ErrorCode::InvalidArgument, "grid must look like 'min:max:n', got '" + std::string(text) + "'");
  }
  double lo = parse_double(trim(text.substr(0, c1)), "grid min");
  double hi = parse_double(trim(text.substr(c1 + 1, c2 - c1 - 1)), "grid max");
  double n = parse_double(trim(text.substr(c2 + 1)), "grid count");
  if (n < 1 || n != std::floor(n)) fail(ErrorCode::InvalidArgument, "grid count must be a positive integer");
  return make(lo, hi, static_cast<std::size_t>(n));
}

double Grid::at(std::size_t i) const {
  if (n == 1) return min;
  if (i + 1 == n) return max;
  return min + spacing() * static_cast<double>(i);
}

std::vector<double> Grid::abscissae() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return out;
}

std::string Grid::describe() const { return format_double(min) + ":" + format_double(max) + ":" + std::to_string(n); }

GridFunction::GridFunction(Grid grid, std::vector<double> values, std::optional<std::vector<double>> standard_errors,
                           int n_replicas)
    : grid_(grid), values_(std::move(values)), standard_errors_(std::move(standard_errors)), n_replicas_(n_replicas) {
  if (values_.size() != grid_.n) {
    fail(ErrorCode::InvalidArgument, "grid has " + std::to_string(grid_.n) + " points but " +
                                         std::to_string(values_.size()) + " values were given");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "grid function values must be finite");
  }
  if (standard_errors_) {
    if (standard_errors_->size() != values_.size()) {
      fail(ErrorCode::InvalidArgument, "standard error count does not match value count");
    }
    for (double e : *standard_errors_) {
      if (!(e >= 0.0) || !std::isfinite(e)) fail(ErrorCode::InvalidArgument, "standard errors must be finite and >= 0");
    }
  }
  if (n_replicas_ < 1) fail(ErrorCode::InvalidArgument, "n_replicas must be >= 1");
}

std::span<const double> GridFunction::standard_errors() const {
  if (!standard_errors_) return {};
  return *standard_errors_;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(const SeedSpec& seed, std::uint64_t stream) {
  std::uint64_t state = seed.master_seed;
  std::uint64_t a = splitmix64(state);
  state = a ^ (seed.replica_index * 0xD1B54A32D192ED03ull);
  std::uint64_t b = splitmix64(state);
  state = b ^ (stream * 0x8CB92BA72F3D8DD7ull);
  return splitmix64(state);
}

Rng make_rng(const SeedSpec& seed, std::uint64_t stream) {
  const std::uint64_t s = derive_seed(seed, stream);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

}  // namespace difflab
