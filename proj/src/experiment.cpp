#include "difflab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>

#include <json.hpp>

namespace difflab {

namespace {

const PointSet& positions(const AnyPointSet& p) {
  if (const auto* w = std::get_if<WeightedPointSet>(&p)) return w->base();
  return std::get<PointSet>(p);
}

bool has_zero_atom(const ModelSpec& spec) { return !std::holds_alternative<model::MarkedPoisson>(spec); }

double observation_diameter(const ExperimentConfig& c) {
  if (const auto* b = std::get_if<model::BetaBulk>(&c.model)) return beta_bulk_window(b->n, b->keep).diameter();
  if (const auto* g = std::get_if<model::Ginibre>(&c.model)) return ginibre_window(g->n, g->keep).diameter();
  if (!c.window) fail(ErrorCode::Config, "model.window: missing");
  return c.window->diameter();
}

double estimate_bin_width(const EstimatorConfig& e) {
  if (e.stat == Stat::Autocorrelation) return e.r_max / static_cast<double>(e.bins);
  const double band = e.periodogram.band;
  return band < 0.0 ? e.grid.spacing() : band;
}

// Adds (c - h, c + h) and its mirror image when the grid reaches negative values.
void add_symmetric(std::vector<Band>& out, double centre, double half, double grid_min) {
  out.push_back({centre - half, centre + half});
  if (centre > 0.0 && grid_min < 0.0) out.push_back({-centre - half, -centre + half});
}

std::string replica_name(const char* stem, int r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_r%03d.csv", stem, r);
  return buf;
}

}  // namespace

GridFunction estimate(const AnyPointSet& p, const EstimatorConfig& e) {
  const PointSet& base = positions(p);
  if (e.stat == Stat::Autocorrelation) {
    return base.dimension() == 1 ? pair_correlation_1d(base, e.r_max, e.bins)
                                 : pair_correlation_radial_2d(base, e.r_max, e.bins);
  }
  return std::visit(
      [&](const auto& set) {
        return base.dimension() == 1 ? periodogram_1d(set, e.grid, e.periodogram)
                                     : periodogram_radial_2d(set, e.grid, e.periodogram);
      },
      p);
}

std::vector<Band> default_exclusions(const ExperimentConfig& c) {
  std::vector<Band> out;
  const double lo = c.estimator.stat == Stat::Autocorrelation ? 0.0 : c.estimator.grid.min;
  const double hi = c.estimator.stat == Stat::Autocorrelation ? c.estimator.r_max : c.estimator.grid.max;
  const double reach = std::max(std::abs(lo), std::abs(hi));
  if (c.estimator.stat == Stat::Diffraction) {
    if (has_zero_atom(c.model)) {
      const double k_min = 8.0 / observation_diameter(c);
      out.push_back({-k_min, k_min});
    }
    if (const auto* r = std::get_if<model::Renewal>(&c.model)) {
      const auto pp = renewal_pure_point(r->waiting);
      if (const auto* comb = std::get_if<LatticeComb>(&pp)) {
        for (double k = 0.0; k <= reach + comb->spacing; k += comb->spacing) add_symmetric(out, k, 0.05, lo);
      }
    }
    if (const auto* b = std::get_if<model::BetaBulk>(&c.model); b && b->beta == 4) {
      add_symmetric(out, 1.0, 0.1, lo);
    }
  } else if (const auto* r = std::get_if<model::Renewal>(&c.model); r && r->waiting.is_discrete()) {
    const auto nu = renewal_nu_density(r->waiting, c.estimator.r_max + 1.0);
    for (const auto& a : nu.atoms) add_symmetric(out, a.location, 0.05, lo);
  }
  return out;
}

double default_tolerance(const ModelSpec& spec) {
  return std::holds_alternative<model::Ginibre>(spec) ? 0.07 : 0.05;
}

std::function<double(double)> theory_curve(const ExperimentConfig& c) {
  const double r_max = c.estimator.r_max + 1.0;
  const SpectralMeasure m = model_measure(c.model, c.estimator.stat, r_max);
  auto density = m.ac_density ? m.ac_density : [](double) { return 0.0; };
  if (c.estimator.stat == Stat::Diffraction) return density;
  // Pair correlation is the autocorrelation density over rho^2.
  const double rho = model_intensity(c.model);
  const double scale = rho > 0.0 ? 1.0 / (rho * rho) : 0.0;
  return [density, scale](double r) { return scale * density(r); };
}

CompareOptions compare_options(const ExperimentConfig& c) {
  CompareOptions o;
  o.bin_width = estimate_bin_width(c.estimator);
  const bool radial = c.estimator.stat == Stat::Autocorrelation && model_dimension(c.model) == 2;
  o.averaging = o.bin_width > 0.0 ? (radial ? TheoryAveraging::Radial : TheoryAveraging::Linear)
                                  : TheoryAveraging::Point;
  o.range = c.verify.range;
  return o;
}

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("DIFFLAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

std::string describe_model(const ModelSpec& spec) {
  const auto j = nlohmann::ordered_json::parse(model_json(spec));
  std::string s = model_name(spec);
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (key == "waiting") {
      s += " waiting=" + describe_waiting(std::get<model::Renewal>(spec).waiting);
    } else {
      s += " " + key + "=" + value.dump();
    }
  }
  return s;
}

ExperimentResult run_experiment_full(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  validate(c.model);
  if (c.verify.replicas < 1) fail(ErrorCode::Config, "verify.replicas: must be at least 1");
  const auto theory = theory_curve(c);
  const auto exclude = c.verify.exclude ? *c.verify.exclude : default_exclusions(c);
  const double tol = c.verify.tol_sup.value_or(default_tolerance(c.model));

  const std::filesystem::path out_dir = c.verify.out_dir;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  }

  const int n = c.verify.replicas;
  std::vector<std::optional<GridFunction>> runs(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < n; r = next++) {
      try {
        const SeedSpec seed{c.verify.seed, static_cast<std::uint64_t>(r)};
        const AnyPointSet sample = sample_model(c.model, c.window, seed);
        runs[static_cast<std::size_t>(r)] = estimate(sample, c.estimator);
        if (!out_dir.empty()) {
          std::visit([&](const auto& s) { write_csv_file(out_dir / replica_name("points", r), s); }, sample);
          write_csv_file(out_dir / replica_name("estimate", r), *runs[static_cast<std::size_t>(r)]);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(resolve_threads(c.verify.threads), n);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  // Report the lowest-index failure so errors are deterministic too.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<GridFunction> replicas;
  replicas.reserve(runs.size());
  for (auto& r : runs) replicas.push_back(std::move(*r));
  GridFunction mean = average_replicas(replicas);

  ComparisonReport report = compare(mean, theory, exclude, tol, c.verify.z_cap, compare_options(c));
  report.model = describe_model(c.model);
  report.stat = stat_name(c.estimator.stat);
  report.seed = c.verify.seed;
  if (c.estimator.stat == Stat::Diffraction) report.bragg_candidates = bragg_candidates(mean);
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!out_dir.empty()) {
    write_csv_file(out_dir / "estimate.csv", mean);
    std::vector<double> ref = report.reference;
    for (auto& v : ref) {
      if (!std::isfinite(v)) v = 0.0;
    }
    // Excluded points carry no reference value; they are written as 0 here
    // and listed in the report's "excluded" bands.
    write_csv_file(out_dir / "theory.csv", GridFunction(mean.grid(), std::move(ref)));
    write_text_file(out_dir / "config.toml", serialise_config(c));
    write_text_file(out_dir / "report.json", report_json(report));
  }
  return {std::move(report), std::move(mean), std::move(replicas)};
}

ComparisonReport run_experiment(const ExperimentConfig& config) { return run_experiment_full(config).report; }

}  // namespace difflab
