#include "difflab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>

namespace difflab {

using std::numbers::pi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kAtomThreshold = 1e-12;
constexpr double kResidualTolerance = 1e-8;
constexpr double kRationalTolerance = 1e-12;
constexpr std::int64_t kMaxDenominator = 10000;

SpectralMeasure constant_measure(double atom_at_zero, double density, std::string label) {
  SpectralMeasure m;
  if (atom_at_zero != 0.0) m.atoms.push_back({0.0, atom_at_zero});
  if (density != 0.0) m.ac_density = [density](double) { return density; };
  m.label = std::move(label);
  return m;
}

void require_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidArgument, "rho must be >= 0");
}

// Best rational approximation p/q of x with q <= kMaxDenominator and
// |x - p/q| <= tol * |x|, via continued-fraction convergents.
std::optional<Rational> reconstruct_rational(double x, double tol) {
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(rest);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h2 = a * h1 + h0;
    const std::int64_t k2 = a * k1 + k0;
    if (k2 > kMaxDenominator) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(x - approx) <= tol * std::abs(x)) return Rational::make(h1, k1);
    const double frac = rest - a_real;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

MeasurePair poisson_theory(double rho) {
  require_rho(rho);
  return {constant_measure(rho, rho * rho, "poisson autocorrelation"),
          constant_measure(rho * rho, rho, "poisson diffraction")};
}

MeasurePair marked_poisson_theory(double rho) {
  require_rho(rho);
  return {constant_measure(rho, 0.0, "marked poisson autocorrelation"),
          constant_measure(0.0, rho, "marked poisson diffraction")};
}

double renewal_backscatter(const WaitingDistribution& mu, double k) {
  const auto m = char_fn(mu, k);
  const auto one_minus = 1.0 - m;
  if (std::abs(one_minus) < kAtomThreshold) {
    fail(ErrorCode::AtomLocation, "k = " + std::to_string(k) + " lies in the pure point support");
  }
  return 2.0 * (std::norm(m) - m.real()) / std::norm(one_minus);
}

std::optional<double> coarsest_lattice(const WaitingDistribution& mu) {
  const auto* d = mu.as_discrete();
  if (!d) return std::nullopt;

  const bool exact = std::all_of(d->atoms.begin(), d->atoms.end(), [](const auto& a) { return a.exact_location; });
  if (exact) {
    // gcd of p_j/q_j = gcd(p_j * Q / q_j) / Q with Q = lcm(q_j).
    std::int64_t q = 1;
    for (const auto& a : d->atoms) q = std::lcm(q, a.exact_location->den);
    std::int64_t g = 0;
    for (const auto& a : d->atoms) g = std::gcd(g, a.exact_location->num * (q / a.exact_location->den));
    return Rational::make(g, q).value();
  }

  double base = d->atoms.front().location;
  for (const auto& a : d->atoms) base = std::min(base, a.location);
  std::vector<Rational> ratios;
  for (const auto& a : d->atoms) {
    auto r = reconstruct_rational(a.location / base, kRationalTolerance);
    if (!r) return std::nullopt;
    ratios.push_back(*r);
  }
  std::int64_t q = 1;
  for (const auto& r : ratios) q = std::lcm(q, r.den);
  std::int64_t g = 0;
  for (const auto& r : ratios) g = std::gcd(g, r.num * (q / r.den));
  return base * static_cast<double>(g) / static_cast<double>(q);
}

PurePointPart renewal_pure_point(const WaitingDistribution& mu) {
  if (auto b = coarsest_lattice(mu)) return LatticeComb{1.0 / *b, 1.0};
  return SingleAtomAtZero{1.0};
}

namespace {

RenewalMeasure continuous_renewal(const WaitingDistribution& mu, double r_max, double step) {
  if (const auto* g = std::get_if<WaitingDistribution::Gamma>(&mu.law()); g && g->shape < 1.0) {
    fail(ErrorCode::InvalidArgument, "renewal density needs a bounded waiting density (gamma shape >= 1)");
  }
  if (step <= 0.0) step = r_max / 4096.0;
  const auto cells = static_cast<std::size_t>(std::ceil(r_max / step - 1e-9));
  const double h = r_max / static_cast<double>(cells);
  const std::size_t n = cells + 1;

  // Trapezoidal rule for int_0^x m(x - y) nu(y) dy, marched forward; nu_i
  // appears on both sides through the m_0 nu_i / 2 end term. Returns the
  // solution and the residual of the discretised equation.
  auto march = [&mu](double dx, std::size_t points) {
    std::vector<double> m(points), nu(points);
    for (std::size_t i = 0; i < points; ++i) m[i] = mu.density(dx * static_cast<double>(i));
    const double diag = 1.0 - 0.5 * dx * m[0];
    nu[0] = m[0];
    for (std::size_t i = 1; i < points; ++i) {
      double conv = 0.5 * m[i] * nu[0];
      for (std::size_t j = 1; j < i; ++j) conv += m[i - j] * nu[j];
      nu[i] = (m[i] + dx * conv) / diag;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      double conv = 0.0;
      if (i > 0) {
        conv = 0.5 * m[i] * nu[0] + 0.5 * m[0] * nu[i];
        for (std::size_t j = 1; j < i; ++j) conv += m[i - j] * nu[j];
      }
      residual = std::max(residual, std::abs(nu[i] - m[i] - dx * conv));
    }
    return std::pair{std::move(nu), residual};
  };

  // Richardson step: the trapezoidal error is O(h^2) for smooth densities, so
  // (4 nu_{h/2} - nu_h) / 3 is accurate to O(h^4).
  auto [coarse, coarse_residual] = march(h, n);
  auto [fine, residual] = march(0.5 * h, 2 * cells + 1);
  residual = std::max(residual, coarse_residual);
  std::vector<double> nu(n);
  for (std::size_t i = 0; i < n; ++i) nu[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;

  if (!(residual < kResidualTolerance)) {
    fail(ErrorCode::NoConvergence, "renewal equation residual " + std::to_string(residual) + " above 1e-8");
  }
  RenewalMeasure out;
  out.density = GridFunction(Grid::make(0.0, r_max, n), std::move(nu));
  out.residual = residual;
  return out;
}

// Locations are merged when they agree to 1e-9 (relative), which absorbs
// rounding in sums like 1/3 + 2/3.
class AtomTable {
 public:
  double* find(double x) {
    auto it = atoms_.lower_bound(x - tol(x));
    if (it != atoms_.end() && std::abs(it->first - x) <= tol(x)) return &it->second;
    return nullptr;
  }
  double get(double x) {
    auto* w = find(x);
    return w ? *w : 0.0;
  }
  void add(double x, double w) {
    if (auto* slot = find(x)) {
      *slot += w;
    } else {
      atoms_.emplace(x, w);
    }
  }
  std::map<double, double>& entries() { return atoms_; }

 private:
  static double tol(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }
  std::map<double, double> atoms_;
};

RenewalMeasure discrete_renewal(const WaitingDistribution::Discrete& d, double r_max) {
  AtomTable nu;
  for (const auto& a : d.atoms) {
    if (a.location <= r_max) nu.add(a.location, a.probability);
  }
  // All atoms are > 0, so the smallest unprocessed location already carries
  // its final weight when it is reached.
  for (auto it = nu.entries().begin(); it != nu.entries().end(); ++it) {
    for (const auto& a : d.atoms) {
      const double x = it->first + a.location;
      if (x <= r_max * (1.0 + 1e-12)) nu.add(x, it->second * a.probability);
    }
  }
  RenewalMeasure out;
  AtomTable mu;
  for (const auto& a : d.atoms) mu.add(a.location, a.probability);
  double residual = 0.0;
  for (const auto& [x, w] : nu.entries()) {
    double conv = 0.0;
    for (const auto& a : d.atoms) conv += a.probability * nu.get(x - a.location);
    residual = std::max(residual, std::abs(w - mu.get(x) - conv));
    out.atoms.push_back({x, w});
  }
  if (!(residual < kResidualTolerance)) {
    fail(ErrorCode::NoConvergence, "renewal convolution residual " + std::to_string(residual) + " above 1e-8");
  }
  out.residual = residual;
  return out;
}

}  // namespace

RenewalMeasure renewal_nu_density(const WaitingDistribution& mu, double r_max, double step) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) fail(ErrorCode::InvalidArgument, "r_max must be positive");
  if (step < 0.0) fail(ErrorCode::InvalidArgument, "step must be positive");
  if (const auto* d = mu.as_discrete()) return discrete_renewal(*d, r_max);
  return continuous_renewal(mu, r_max, step);
}

double dyson_f(int beta, double r) {
  r = std::abs(r);
  switch (beta) {
    case 1: {
      const double s = sinc_s(r);
      return s * s + sinc_s_prime(r) * sine_tail(r);
    }
    case 2: {
      const double s = sinc_s(r);
      return s * s;
    }
    case 4: {
      const double s = sinc_s(2.0 * r);
      return s * s - 2.0 * sinc_s_prime(2.0 * r) * sine_partial2(r);
    }
    default:
      fail(ErrorCode::InvalidArgument, "beta must be 1, 2 or 4");
  }
}

double dyson_h(int beta, double k) {
  const double a = std::abs(k);
  switch (beta) {
    case 1:
      if (a <= 1.0) return a * (2.0 - std::log(2.0 * a + 1.0));
      return 2.0 - a * std::log((2.0 * a + 1.0) / (2.0 * a - 1.0));
    case 2:
      return std::min(a, 1.0);
    case 4:
      if (a == 1.0) fail(ErrorCode::SingularPoint, "h_4 has a logarithmic singularity at |k| = 1");
      if (a <= 2.0) return 0.25 * a * (2.0 - std::log(std::abs(1.0 - a)));
      return 1.0;
    default:
      fail(ErrorCode::InvalidArgument, "beta must be 1, 2 or 4");
  }
}

double ginibre_g(double r) { return -std::expm1(-pi * r * r); }

double ginibre_h(double k) { return -std::expm1(-pi * k * k); }

Stat parse_stat(const std::string& text) {
  if (text == "autocorrelation" || text == "paircorr") return Stat::Autocorrelation;
  if (text == "diffraction") return Stat::Diffraction;
  fail(ErrorCode::InvalidArgument, "stat must be 'autocorrelation' or 'diffraction', got '" + text + "'");
}

std::string stat_name(Stat s) { return s == Stat::Autocorrelation ? "autocorrelation" : "diffraction"; }

namespace {

SpectralMeasure renewal_measure(const WaitingDistribution& mu, Stat stat, double r_max) {
  SpectralMeasure m;
  if (stat == Stat::Diffraction) {
    m.label = "renewal diffraction";
    std::visit(overloaded{
                   [&](const SingleAtomAtZero& a) { m.atoms.push_back({0.0, a.intensity}); },
                   [&](const LatticeComb& c) { m.comb = c; },
               },
               renewal_pure_point(mu));
    m.ac_density = [mu](double k) {
      try {
        return 1.0 - renewal_backscatter(mu, k);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AtomLocation) throw;
        // The density is defined almost everywhere; use its two-sided limit.
        constexpr double dk = 1e-5;
        return 1.0 - 0.5 * (renewal_backscatter(mu, k - dk) + renewal_backscatter(mu, k + dk));
      }
    };
    return m;
  }
  m.label = "renewal autocorrelation";
  m.atoms.push_back({0.0, 1.0});
  auto nu = renewal_nu_density(mu, r_max);
  if (nu.density) {
    auto table = std::make_shared<GridFunction>(std::move(*nu.density));
    m.ac_density = [table](double x) {
      x = std::abs(x);
      const auto& g = table->grid();
      if (x >= g.max) return 1.0;  // renewal theorem: nu density tends to the intensity
      const double pos = (x - g.min) / g.spacing();
      const auto i = static_cast<std::size_t>(pos);
      const double t = pos - static_cast<double>(i);
      return (1.0 - t) * table->value(i) + t * table->value(i + 1);
    };
  } else {
    for (const auto& a : nu.atoms) {
      m.atoms.push_back(a);
      m.atoms.push_back({-a.location, a.intensity});
    }
    std::sort(m.atoms.begin(), m.atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  }
  return m;
}

}  // namespace

SpectralMeasure model_measure(const ModelSpec& spec, Stat stat, double r_max) {
  validate(spec);
  auto pick = [stat](MeasurePair p) { return stat == Stat::Autocorrelation ? p.autocorrelation : p.diffraction; };
  return std::visit(
      overloaded{
          [&](const model::Poisson& m) { return pick(poisson_theory(m.rho)); },
          [&](const model::MarkedPoisson& m) { return pick(marked_poisson_theory(m.rho)); },
          [&](const model::Matern&) -> SpectralMeasure {
            fail(ErrorCode::InvalidArgument, "no closed-form autocorrelation or diffraction for the Matern model");
          },
          [&](const model::Renewal& m) { return renewal_measure(m.waiting, stat, r_max); },
          [&](const model::BetaBulk& m) {
            SpectralMeasure out;
            out.atoms.push_back({0.0, 1.0});
            const int beta = m.beta;
            if (stat == Stat::Autocorrelation) {
              out.ac_density = [beta](double x) { return 1.0 - dyson_f(beta, x); };
              out.label = "dyson beta=" + std::to_string(beta) + " autocorrelation";
            } else {
              out.ac_density = [beta](double k) { return dyson_h(beta, k); };
              out.label = "dyson beta=" + std::to_string(beta) + " diffraction";
            }
            return out;
          },
          [&](const model::Ginibre&) {
            SpectralMeasure out;
            out.atoms.push_back({0.0, 1.0});
            if (stat == Stat::Autocorrelation) {
              out.ac_density = ginibre_g;
              out.label = "ginibre autocorrelation";
            } else {
              out.ac_density = ginibre_h;
              out.label = "ginibre diffraction";
            }
            return out;
          },
      },
      spec);
}

}  // namespace difflab
