#pragma once

#include <optional>
#include <string>
#include <variant>

#include "difflab/core.hpp"
#include "difflab/io.hpp"
#include "difflab/specfun.hpp"

namespace difflab {

namespace model {

struct Poisson {
  double rho = 1.0;
  int dim = 1;
};
struct MarkedPoisson {
  double rho = 1.0;
  int dim = 1;
};
/// Matern type II hard-core thinning of a Poisson process.
struct Matern {
  double rho = 1.0;
  double hardcore = 1.0;
  int dim = 1;
};
struct Renewal {
  WaitingDistribution waiting = WaitingDistribution::exponential();
};
/// Bulk of the Gaussian beta-ensemble, beta in {1, 2, 4}.
struct BetaBulk {
  int beta = 2;
  int n = 2048;
  double keep = 0.1;
};
struct Ginibre {
  int n = 512;
  double keep = 0.5;
};

}  // namespace model

using ModelSpec = std::variant<model::Poisson, model::MarkedPoisson, model::Matern, model::Renewal,
                               model::BetaBulk, model::Ginibre>;

/// "poisson", "marked_poisson", "matern", "renewal", "dyson", "ginibre".
std::string model_name(const ModelSpec& spec);
/// Point density of the model (after thinning for Matern); 1 for the renewal and
/// random-matrix models.
double model_intensity(const ModelSpec& spec);
int model_dimension(const ModelSpec& spec);
/// Throws InvalidArgument when a parameter is out of range.
void validate(const ModelSpec& spec);

// Seed streams, so that e.g. the marks of a marked Poisson sample are
// independent of its positions under the same SeedSpec.
inline constexpr std::uint64_t kStreamPositions = 0;
inline constexpr std::uint64_t kStreamMarks = 1;
inline constexpr std::uint64_t kStreamThinning = 2;

PointSet sample_poisson(double rho, const Window& w, const SeedSpec& seed);
WeightedPointSet mark_pm1(const PointSet& p, const SeedSpec& seed);
PointSet matern2_thin(const PointSet& p, double hardcore, const SeedSpec& seed);
PointSet sample_renewal(const WaitingDistribution& mu, const Window& w, const SeedSpec& seed);
PointSet sample_beta_bulk(int beta, int n, double keep, const SeedSpec& seed);
PointSet sample_ginibre(int n, double keep, const SeedSpec& seed);

/// Window a random-matrix model produces (fixed by N and the keep fraction).
Window beta_bulk_window(int n, double keep);
Window ginibre_window(int n, double keep);

/// Dispatches on the model. `window` is required for Poisson-type and renewal
/// models and ignored (may be empty) for the random-matrix models.
AnyPointSet sample_model(const ModelSpec& spec, const std::optional<Window>& window, const SeedSpec& seed);

}  // namespace difflab
