#include "difflab/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace difflab {

using std::numbers::pi;

double sinc_s(double r) {
  const double x = pi * r;
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinc_s_prime(double r) {
  const double x = pi * r;
  if (std::abs(x) < 1e-2) {
    // Series of d/dr [sin(pi r)/(pi r)]; next term is O(x^9).
    const double x2 = x * x;
    return pi * x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)));
  }
  return (std::cos(x) * x - std::sin(x)) / (pi * r * r);
}

namespace {

// Power series, used for |x| <= 4 where it converges without cancellation
// trouble (largest term ~ 5).
double si_series(double x) {
  const double x2 = x * x;
  double term = x;  // x^(2n+1) / (2n+1)!
  double sum = x;
  for (int n = 1; n < 60; ++n) {
    term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
    const double add = term / (2.0 * n + 1.0);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Continued fraction for E1(ix) evaluated with modified Lentz; then
// Si(x) = pi/2 + Im(e^{-ix} * CF). Converges in a few dozen terms for x > 4.
double si_continued_fraction(double x) {
  using cd = std::complex<double>;
  constexpr double tiny = 1e-300;
  cd b(1.0, x);
  cd c(1.0 / tiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 2; i < 200; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= cd(std::cos(x), -std::sin(x));
  return pi / 2.0 + h.imag();
}

}  // namespace

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x <= 4.0) return si_series(x);
  return si_continued_fraction(x);
}

double sine_tail(double r) {
  if (r < 0.0) fail(ErrorCode::NegativeArgument, "sine_tail needs r >= 0");
  return 0.5 - sine_integral(pi * r) / pi;
}

double sine_partial2(double r) {
  if (r < 0.0) fail(ErrorCode::NegativeArgument, "sine_partial2 needs r >= 0");
  return sine_integral(2.0 * pi * r) / (2.0 * pi);
}

// ---------------------------------------------------------------------------

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

std::optional<Rational> Rational::parse(std::string_view text) {
  auto to_int = [](std::string_view s) -> std::optional<std::int64_t> {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return std::nullopt;
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto n = to_int(text);
    if (!n) return std::nullopt;
    return Rational{*n, 1};
  }
  auto n = to_int(text.substr(0, slash));
  auto d = to_int(text.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return make(*n, *d);
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorCode::InvalidArgument, "rational arithmetic overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorCode::InvalidArgument, "rational arithmetic overflow");
  return out;
}

}  // namespace

Rational operator+(Rational a, Rational b) {
  const std::int64_t g = std::gcd(a.den, b.den);
  const std::int64_t den = checked_mul(a.den / g, b.den);
  const std::int64_t num = checked_add(checked_mul(a.num, b.den / g), checked_mul(b.num, a.den / g));
  return Rational::make(num, den);
}

Rational operator*(Rational a, Rational b) {
  const std::int64_t g1 = std::gcd(a.num, b.den);
  const std::int64_t g2 = std::gcd(b.num, a.den);
  const std::int64_t s1 = g1 == 0 ? 1 : g1;
  const std::int64_t s2 = g2 == 0 ? 1 : g2;
  return Rational::make(checked_mul(a.num / s1, b.num / s2), checked_mul(a.den / s2, b.den / s1));
}

Rational operator/(Rational a, Rational b) {
  if (b.num == 0) fail(ErrorCode::InvalidArgument, "rational division by zero");
  return a * Rational::make(b.den, b.num);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kMeanTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace

WaitingDistribution WaitingDistribution::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be positive");
  return WaitingDistribution(Exponential{1.0});
}

WaitingDistribution WaitingDistribution::gamma(double shape, double rate) {
  require(shape > 0.0 && std::isfinite(shape), "gamma shape must be positive");
  require(rate > 0.0 && std::isfinite(rate), "gamma rate must be positive");
  return WaitingDistribution(Gamma{shape, shape});
}

WaitingDistribution WaitingDistribution::uniform(double a, double b) {
  require(a >= 0.0 && b > a && std::isfinite(b), "uniform law needs 0 <= a < b");
  const double m = 0.5 * (a + b);
  return WaitingDistribution(Uniform{a / m, b / m});
}

WaitingDistribution WaitingDistribution::discrete(std::vector<DiscreteAtom> atoms) {
  require(!atoms.empty(), "discrete law needs at least one atom");
  bool exact = true;
  double total = 0.0;
  for (const auto& a : atoms) {
    require(a.location > 0.0 && std::isfinite(a.location), "discrete atoms must sit at positive locations");
    require(a.probability > 0.0 && std::isfinite(a.probability), "discrete atom probabilities must be positive");
    total += a.probability;
    exact = exact && a.exact_location && a.exact_probability;
  }
  require(std::abs(total - 1.0) < 1e-9, "discrete probabilities must sum to 1");

  if (exact) {
    Rational psum{0, 1};
    Rational mean{0, 1};
    for (const auto& a : atoms) {
      psum = psum + *a.exact_probability;
      mean = mean + *a.exact_probability * *a.exact_location;
    }
    require(psum == Rational{1, 1}, "discrete probabilities must sum to exactly 1");
    for (auto& a : atoms) {
      a.exact_location = *a.exact_location / mean;
      a.location = a.exact_location->value();
      a.probability = a.exact_probability->value();
    }
    return WaitingDistribution(Discrete{std::move(atoms)});
  }

  double mean = 0.0;
  for (auto& a : atoms) {
    a.probability /= total;
    mean += a.probability * a.location;
  }
  const bool rescale = std::abs(mean - 1.0) > kMeanTolerance;
  for (auto& a : atoms) {
    if (rescale) a.location /= mean;
    // A partially exact description gives no exact arithmetic to lean on.
    a.exact_probability.reset();
    a.exact_location.reset();
  }
  return WaitingDistribution(Discrete{std::move(atoms)});
}

WaitingDistribution WaitingDistribution::discrete(const std::vector<std::pair<double, double>>& atoms) {
  std::vector<DiscreteAtom> out;
  out.reserve(atoms.size());
  for (auto [loc, p] : atoms) out.push_back({loc, p, std::nullopt, std::nullopt});
  return discrete(std::move(out));
}

std::string WaitingDistribution::kind_name() const {
  struct V {
    std::string operator()(const Exponential&) const { return "exponential"; }
    std::string operator()(const Gamma&) const { return "gamma"; }
    std::string operator()(const Uniform&) const { return "uniform"; }
    std::string operator()(const Discrete&) const { return "discrete"; }
  };
  return std::visit(V{}, law_);
}

double WaitingDistribution::mean() const {
  struct V {
    double operator()(const Exponential& e) const { return 1.0 / e.rate; }
    double operator()(const Gamma& g) const { return g.shape / g.rate; }
    double operator()(const Uniform& u) const { return 0.5 * (u.a + u.b); }
    double operator()(const Discrete& d) const {
      double m = 0.0;
      for (const auto& a : d.atoms) m += a.probability * a.location;
      return m;
    }
  };
  return std::visit(V{}, law_);
}

double WaitingDistribution::variance() const {
  struct V {
    double operator()(const Exponential& e) const { return 1.0 / (e.rate * e.rate); }
    double operator()(const Gamma& g) const { return g.shape / (g.rate * g.rate); }
    double operator()(const Uniform& u) const { return (u.b - u.a) * (u.b - u.a) / 12.0; }
    double operator()(const Discrete& d) const {
      double m = 0.0, m2 = 0.0;
      for (const auto& a : d.atoms) {
        m += a.probability * a.location;
        m2 += a.probability * a.location * a.location;
      }
      return std::max(0.0, m2 - m * m);
    }
  };
  return std::visit(V{}, law_);
}

double WaitingDistribution::stddev() const { return std::sqrt(variance()); }

double WaitingDistribution::density(double x) const {
  struct V {
    double x;
    double operator()(const Exponential& e) const { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); }
    double operator()(const Gamma& g) const {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return g.shape == 1.0 ? g.rate : (g.shape > 1.0 ? 0.0 : INFINITY);
      return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) - g.rate * x - std::lgamma(g.shape));
    }
    double operator()(const Uniform& u) const { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; }
    double operator()(const Discrete&) const { return 0.0; }
  };
  return std::visit(V{x}, law_);
}

double WaitingDistribution::sample(Rng& rng) const {
  struct V {
    Rng& rng;
    double operator()(const Exponential& e) const { return std::exponential_distribution<double>(e.rate)(rng); }
    double operator()(const Gamma& g) const { return std::gamma_distribution<double>(g.shape, 1.0 / g.rate)(rng); }
    double operator()(const Uniform& u) const { return std::uniform_real_distribution<double>(u.a, u.b)(rng); }
    double operator()(const Discrete& d) const {
      if (d.atoms.size() == 1) return d.atoms.front().location;
      std::vector<double> p;
      p.reserve(d.atoms.size());
      for (const auto& a : d.atoms) p.push_back(a.probability);
      std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
      return d.atoms[pick(rng)].location;
    }
  };
  return std::visit(V{rng}, law_);
}

std::complex<double> char_fn(const WaitingDistribution& d, double k) {
  using cd = std::complex<double>;
  const double w = 2.0 * pi * k;
  struct V {
    double w;
    cd operator()(const WaitingDistribution::Exponential& e) const { return e.rate / cd(e.rate, w); }
    cd operator()(const WaitingDistribution::Gamma& g) const { return std::pow(cd(1.0, w / g.rate), -g.shape); }
    cd operator()(const WaitingDistribution::Uniform& u) const {
      // e^{-i w m} * sin(w h)/(w h), m = midpoint, h = half width.
      const double m = 0.5 * (u.a + u.b);
      const double h = 0.5 * (u.b - u.a);
      const double x = w * h;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return std::polar(sinc, -w * m);
    }
    cd operator()(const WaitingDistribution::Discrete& dd) const {
      cd s = 0.0;
      for (const auto& a : dd.atoms) s += a.probability * std::polar(1.0, -w * a.location);
      return s;
    }
  };
  return std::visit(V{w}, d.law());
}

}  // namespace difflab
