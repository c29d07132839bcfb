// difflab command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "difflab/difflab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitFailedVerification = 2;

struct CliFailure {
  std::string message;
};

void check(difflab_status s, const std::string& context) {
  if (s != DIFFLAB_OK) {
    throw CliFailure{context + ": " + difflab_status_name(s) + ": " + difflab_last_error()};
  }
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  difflab_string_free(s);
  return out;
}

void log_line(const std::string& s) { std::cerr << s << "\n"; }

void log_header() { log_line(std::string("difflab ") + difflab_version()); }

struct ModelFlags {
  std::string name;
  std::optional<double> rho, hardcore, keep;
  std::optional<int> dim, beta, n;
  std::optional<std::string> waiting;

  void attach(CLI::App* app, bool required) {
    auto* m = app->add_option("--model", name, "poisson | marked_poisson | matern | renewal | dyson | ginibre");
    if (required) m->required();
    app->add_option("--rho", rho, "intensity (poisson, marked_poisson, matern)");
    app->add_option("--dim", dim, "dimension 1 or 2 (poisson, marked_poisson, matern)");
    app->add_option("--hardcore", hardcore, "hard-core distance D (matern)");
    app->add_option("--beta", beta, "1, 2 or 4 (dyson)");
    app->add_option("--n", n, "matrix size (dyson, ginibre)");
    app->add_option("--keep", keep, "kept fraction of the spectrum (dyson, ginibre)");
    app->add_option("--waiting", waiting,
                    "waiting law (renewal): exponential | gamma SHAPE | uniform A B | discrete LOC:P ...");
  }

  std::string json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    if (rho) j["rho"] = *rho;
    if (dim) j["dim"] = *dim;
    if (hardcore) j["hardcore"] = *hardcore;
    if (beta) j["beta"] = *beta;
    if (n) j["n"] = *n;
    if (keep) j["keep"] = *keep;
    if (waiting) j["waiting"] = *waiting;
    return j.dump();
  }
};

std::filesystem::path replica_path(const std::filesystem::path& out, int r, int replicas) {
  if (replicas == 1) return out;
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_r%03d", r);
  auto p = out;
  p.replace_filename(out.stem().string() + suffix + out.extension().string());
  return p;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_filename(out.stem().string() + ".atoms.json");
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliFailure{"cannot write " + path.string()};
  f << text;
  if (!f) throw CliFailure{"cannot write " + path.string()};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliFailure{"cannot read " + path.string()};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random point sets: sampling, diffraction theory, estimation and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", difflab_version());

  // sample
  auto* sample = app.add_subcommand("sample", "Draw realisations of a model and write them as CSV");
  ModelFlags sample_model;
  sample_model.attach(sample, true);
  std::optional<std::string> window;
  std::uint64_t seed = 0;
  int replicas = 1;
  std::string sample_out;
  sample->add_option("--window", window, "observation window, e.g. \"interval 10000\", \"disk 50\"");
  sample->add_option("--seed", seed, "master seed")->required();
  sample->add_option("--replicas", replicas, "number of replicas; outputs get _rNNN suffixes")
      ->check(CLI::PositiveNumber);
  sample->add_option("--out", sample_out, "output CSV path")->required();

  // theory
  auto* theory = app.add_subcommand("theory", "Tabulate the absolutely continuous density of a model");
  ModelFlags theory_model;
  theory_model.attach(theory, true);
  std::string theory_stat, theory_grid, theory_out;
  theory->add_option("--stat", theory_stat, "autocorrelation | diffraction")->required();
  theory->add_option("--grid", theory_grid, "min:max:n")->required();
  theory->add_option("--out", theory_out, "output CSV; atoms go to <stem>.atoms.json")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate pair correlation or diffraction from a point CSV");
  std::string est_in, est_stat, est_grid, est_out;
  std::optional<double> band;
  bool remove_mean = false, taper = false;
  std::optional<int> directions;
  est->add_option("--in", est_in, "point set CSV")->required();
  est->add_option("--stat", est_stat, "paircorr | diffraction")->required();
  est->add_option("--grid", est_grid,
                  "min:max:n; for paircorr 0:r_max:bins (bins of width r_max/bins, centres written)")
      ->required();
  est->add_option("--out", est_out, "output CSV")->required();
  est->add_option("--band", band, "periodogram band width (default: grid spacing; 0: point evaluation)");
  est->add_flag("--remove-mean", remove_mean, "subtract the window transform times the mean density");
  est->add_flag("--taper", taper, "cosine-squared taper");
  est->add_option("--directions", directions, "directions per radius in 2D (default 64)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a configured experiment and compare against theory");
  std::string config_path;
  std::optional<std::string> report_path, out_dir;
  int threads = 0;
  verify->add_option("--config", config_path, "experiment config (sectioned text or JSON)")->required();
  verify->add_option("--report", report_path, "write the report JSON here (default: stdout)");
  verify->add_option("--out-dir", out_dir, "directory for replica and averaged CSVs");
  verify->add_option("--threads", threads, "worker threads (capped by DIFFLAB_THREADS)");

  // reproduce-figures
  auto* figures = app.add_subcommand("reproduce-figures", "Write the plot data bundle and Vega-Lite specs");
  std::string figures_out;
  figures->add_option("--out", figures_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitInvalid;
  }

  try {
    log_header();
    if (*sample) {
      const std::string model = sample_model.json();
      log_line("model: " + model);
      log_line("window: " + window.value_or("(from model)"));
      log_line("seed: " + std::to_string(seed));
      log_line("replicas: " + std::to_string(replicas));
      for (int r = 0; r < replicas; ++r) {
        difflab_pointset* p = nullptr;
        check(difflab_sample(model.c_str(), window ? window->c_str() : nullptr, seed, static_cast<uint64_t>(r), &p),
              "sample");
        const auto path = replica_path(sample_out, r, replicas);
        const auto s = difflab_pointset_write_csv(p, path.string().c_str());
        const std::size_t count = difflab_pointset_size(p);
        difflab_pointset_free(p);
        check(s, "write " + path.string());
        log_line("wrote " + path.string() + " (" + std::to_string(count) + " points)");
      }
    } else if (*theory) {
      const std::string model = theory_model.json();
      log_line("model: " + model);
      log_line("stat: " + theory_stat + ", grid: " + theory_grid);
      difflab_grid* g = nullptr;
      char* atoms = nullptr;
      check(difflab_theory(model.c_str(), theory_stat.c_str(), theory_grid.c_str(), &g, &atoms), "theory");
      const std::string atoms_text = take_string(atoms);
      const auto s = difflab_grid_write_csv(g, theory_out.c_str());
      difflab_grid_free(g);
      check(s, "write " + theory_out);
      write_file(sidecar_path(theory_out), atoms_text);
      log_line("wrote " + theory_out + " and " + sidecar_path(theory_out).string());
    } else if (*est) {
      nlohmann::ordered_json e;
      e["stat"] = est_stat;
      if (est_stat == "paircorr" || est_stat == "autocorrelation") {
        // 0:r_max:bins
        const auto first = est_grid.find(':');
        const auto second = est_grid.rfind(':');
        if (first == std::string::npos || first == second) throw CliFailure{"--grid must be min:max:n"};
        try {
          const double lo = std::stod(est_grid.substr(0, first));
          if (lo != 0.0) throw CliFailure{"paircorr grids start at 0"};
          e["r_max"] = std::stod(est_grid.substr(first + 1, second - first - 1));
          e["bins"] = std::stoll(est_grid.substr(second + 1));
        } catch (const std::logic_error&) {
          throw CliFailure{"--grid must be min:max:n"};
        }
      } else {
        e["grid"] = est_grid;
      }
      if (band) e["band"] = *band;
      if (remove_mean) e["remove_mean"] = true;
      if (taper) e["taper"] = true;
      if (directions) e["directions"] = *directions;
      log_line("input: " + est_in);
      log_line("estimator: " + e.dump());
      difflab_pointset* p = nullptr;
      check(difflab_pointset_read_csv(est_in.c_str(), &p), "read " + est_in);
      difflab_grid* g = nullptr;
      const auto s = difflab_estimate(p, e.dump().c_str(), &g);
      difflab_pointset_free(p);
      check(s, "estimate");
      const auto w = difflab_grid_write_csv(g, est_out.c_str());
      difflab_grid_free(g);
      check(w, "write " + est_out);
      log_line("wrote " + est_out);
    } else if (*verify) {
      const std::string text = read_file(config_path);
      char* normal = nullptr;
      check(difflab_config_normalise(text.c_str(), &normal), "config " + config_path);
      const std::string echo = take_string(normal);
      log_line("config " + config_path + ":");
      std::cerr << echo;
      difflab_report* r = nullptr;
      check(difflab_experiment_run(text.c_str(), threads, out_dir ? out_dir->c_str() : nullptr, &r), "verify");
      char* json = nullptr;
      const auto s = difflab_report_json(r, &json);
      const bool pass = difflab_report_pass(r) != 0;
      difflab_report_free(r);
      check(s, "report");
      const std::string report = take_string(json);
      if (report_path) {
        write_file(*report_path, report);
        log_line("wrote " + *report_path);
      } else {
        std::cout << report;
      }
      log_line(pass ? "verification passed" : "verification FAILED");
      return pass ? kExitOk : kExitFailedVerification;
    } else if (*figures) {
      check(difflab_reproduce_figures(figures_out.c_str()), "reproduce-figures");
      log_line("wrote figure bundle to " + figures_out);
    }
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
