#pragma once

// Closed-form autocorrelation and diffraction of the point process models.
//
// Fourier convention: f-hat(k) = int f(x) exp(-2 pi i k x) dx.
//
// Two different functions are both commonly called "h":
//  * renewal_backscatter(mu, k) enters the renewal diffraction as (1 - h) lambda;
//  * dyson_h(beta, k) IS the diffuse diffraction density (delta_0 + h lambda).

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "difflab/core.hpp"
#include "difflab/samplers.hpp"
#include "difflab/specfun.hpp"

namespace difflab {

struct SingleAtomAtZero {
  double intensity = 1.0;
};

using PurePointPart = std::variant<SingleAtomAtZero, LatticeComb>;

struct MeasurePair {
  SpectralMeasure autocorrelation;
  SpectralMeasure diffraction;
};

/// gamma = rho delta_0 + rho^2 lambda, gamma-hat = rho^2 delta_0 + rho lambda.
MeasurePair poisson_theory(double rho);
/// Random +-1 weights: gamma = rho delta_0, gamma-hat = rho lambda.
MeasurePair marked_poisson_theory(double rho);

/// h(k) = 2 (|mu^|^2 - Re mu^) / |1 - mu^|^2. Throws AtomLocation where
/// |1 - mu^(k)| < 1e-12.
double renewal_backscatter(const WaitingDistribution& mu, double k);

/// delta_0 for non-lattice support, otherwise the comb delta_{Z/b} where bZ is
/// the coarsest lattice containing supp(mu).
PurePointPart renewal_pure_point(const WaitingDistribution& mu);

/// Spacing b of the coarsest lattice bZ containing the discrete support, if any.
std::optional<double> coarsest_lattice(const WaitingDistribution& mu);

/// Renewal measure nu = mu + mu * mu + ... restricted to (0, r_max].
struct RenewalMeasure {
  std::optional<GridFunction> density;  // continuous mu, grid 0:r_max
  std::vector<Atom> atoms;              // discrete mu, ascending locations
  double residual = 0.0;                // sup norm of nu - mu - mu * nu
};

/// Continuous mu: trapezoidal discretisation of nu = mu + mu * nu on a uniform
/// grid of the given step (0 selects r_max / 4096) and at half that step,
/// combined by Richardson extrapolation; the residual is that of the
/// discretised equations. Discrete mu: exact atoms by iterated convolution.
/// Throws NoConvergence if the residual exceeds 1e-8.
RenewalMeasure renewal_nu_density(const WaitingDistribution& mu, double r_max, double step = 0.0);

/// f_beta(r) with the autocorrelation delta_0 + (1 - f_beta(|x|)) lambda.
double dyson_f(int beta, double r);
/// Diffuse diffraction density h_beta(k). Throws SingularPoint for beta = 4, |k| = 1.
double dyson_h(int beta, double k);

/// 1 - exp(-pi t^2); ginibre_g (pair correlation) and ginibre_h (diffraction)
/// coincide.
double ginibre_g(double r);
double ginibre_h(double k);

enum class Stat { Autocorrelation, Diffraction };
Stat parse_stat(const std::string& text);
std::string stat_name(Stat s);

/// Autocorrelation or diffraction measure of a model, with the ac density as a
/// callable. `r_max` bounds the renewal density table for continuous mu.
SpectralMeasure model_measure(const ModelSpec& spec, Stat stat, double r_max = 50.0);

}  // namespace difflab
