#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "difflab/core.hpp"

namespace difflab {

/// s(r) = sin(pi r) / (pi r), s(0) = 1.
double sinc_s(double r);
/// s'(r), odd, s'(0) = 0.
double sinc_s_prime(double r);
/// Sine integral Si(x) = int_0^x sin(t)/t dt, absolute error below 1e-14.
double sine_integral(double x);
/// int_r^inf s(t) dt = 1/2 - Si(pi r)/pi. Throws NegativeArgument for r < 0.
double sine_tail(double r);
/// int_0^r s(2t) dt = Si(2 pi r) / (2 pi). Throws NegativeArgument for r < 0.
double sine_partial2(double r);

/// Exact rational p/q with q > 0, always stored in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  /// "3/2", "2" or "-1/4".
  static std::optional<Rational> parse(std::string_view text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator+(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
Rational operator/(Rational a, Rational b);

/// Waiting-time law mu on the positive half line, normalised to mean 1.
class WaitingDistribution {
 public:
  struct Exponential {
    double rate;
  };
  struct Gamma {
    double shape;
    double rate;
  };
  struct Uniform {
    double a;
    double b;
  };
  struct DiscreteAtom {
    double location;
    double probability;
    std::optional<Rational> exact_location;
    std::optional<Rational> exact_probability;
  };
  struct Discrete {
    std::vector<DiscreteAtom> atoms;
  };
  using Law = std::variant<Exponential, Gamma, Uniform, Discrete>;

  /// Each factory rescales its parameters so the mean is exactly 1.
  static WaitingDistribution exponential(double rate = 1.0);
  static WaitingDistribution gamma(double shape, double rate = 1.0);
  static WaitingDistribution uniform(double a, double b);
  static WaitingDistribution discrete(std::vector<DiscreteAtom> atoms);
  /// Convenience for (location, probability) pairs given as doubles.
  static WaitingDistribution discrete(const std::vector<std::pair<double, double>>& atoms);

  const Law& law() const { return law_; }
  std::string kind_name() const;
  bool is_discrete() const { return std::holds_alternative<Discrete>(law_); }
  const Discrete* as_discrete() const { return std::get_if<Discrete>(&law_); }

  double mean() const;
  double variance() const;
  double stddev() const;
  /// Lebesgue density; zero for the discrete kind.
  double density(double x) const;
  double sample(Rng& rng) const;

 private:
  explicit WaitingDistribution(Law law) : law_(std::move(law)) {}
  Law law_;
};

/// mu-hat(k) = int exp(-2 pi i k x) dmu(x).
std::complex<double> char_fn(const WaitingDistribution& d, double k);

}  // namespace difflab
