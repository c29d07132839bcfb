#include "difflab/difflab.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "difflab/experiment.hpp"
#include "difflab/figures.hpp"

struct difflab_pointset {
  difflab::AnyPointSet value;
};
struct difflab_grid {
  difflab::GridFunction value;
};
struct difflab_report {
  difflab::ComparisonReport value;
};

namespace {

using namespace difflab;

thread_local std::string g_last_error;

difflab_status record(difflab_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
difflab_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return DIFFLAB_OK;
  } catch (const Error& e) {
    return record(static_cast<difflab_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(DIFFLAB_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return record(DIFFLAB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DIFFLAB_INTERNAL, e.what());
  } catch (...) {
    return record(DIFFLAB_INTERNAL, "unknown failure");
  }
}

void require_ptr(const void* p, const char* name) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const PointSet& base_of(const AnyPointSet& p) {
  if (const auto* w = std::get_if<WeightedPointSet>(&p)) return w->base();
  return std::get<PointSet>(p);
}

EstimatorConfig estimator_from_json(const char* text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) fail(ErrorCode::Config, "estimator: must be a JSON object");
  EstimatorConfig e;
  for (const auto& [key, v] : j.items()) {
    if (key == "stat") {
      e.stat = parse_stat(v.get<std::string>());
    } else if (key == "grid") {
      e.grid = Grid::parse(v.get<std::string>());
    } else if (key == "r_max") {
      e.r_max = v.get<double>();
    } else if (key == "bins") {
      const auto b = v.get<long long>();
      if (b < 1) fail(ErrorCode::Config, "estimator.bins: must be at least 1");
      e.bins = static_cast<std::size_t>(b);
    } else if (key == "band") {
      e.periodogram.band = v.get<double>();
    } else if (key == "remove_mean") {
      e.periodogram.remove_mean = v.get<bool>();
    } else if (key == "taper") {
      e.periodogram.taper = v.get<bool>();
    } else if (key == "directions") {
      e.periodogram.directions = v.get<int>();
    } else {
      fail(ErrorCode::Config, "estimator." + key + ": unknown key");
    }
  }
  return e;
}

}  // namespace

extern "C" {

const char* difflab_version(void) { return "0.3.0"; }

const char* difflab_status_name(difflab_status status) {
  if (status == DIFFLAB_OK) return "Ok";
  if (status == DIFFLAB_INTERNAL) return "Internal";
  if (status >= 1 && status <= 12) return error_code_name(static_cast<ErrorCode>(status));
  return "Unknown";
}

const char* difflab_last_error(void) { return g_last_error.c_str(); }

void difflab_string_free(char* s) { std::free(s); }

difflab_status difflab_sample(const char* model_json, const char* window, uint64_t master_seed,
                              uint64_t replica_index, difflab_pointset** out) {
  return guarded([&] {
    require_ptr(model_json, "model_json");
    require_ptr(out, "out");
    const ModelSpec spec = parse_model_json(model_json);
    std::optional<Window> w;
    if (window) w = Window::parse(window);
    auto sample = sample_model(spec, w, SeedSpec{master_seed, replica_index});
    *out = new difflab_pointset{std::move(sample)};
  });
}

difflab_status difflab_pointset_read_csv(const char* path, difflab_pointset** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new difflab_pointset{read_point_csv_file(path)};
  });
}

difflab_status difflab_pointset_write_csv(const difflab_pointset* p, const char* path) {
  return guarded([&] {
    require_ptr(p, "pointset");
    require_ptr(path, "path");
    std::visit([&](const auto& s) { write_csv_file(path, s); }, p->value);
  });
}

difflab_status difflab_pointset_csv(const difflab_pointset* p, char** out) {
  return guarded([&] {
    require_ptr(p, "pointset");
    require_ptr(out, "out");
    std::ostringstream s;
    std::visit([&](const auto& set) { write_csv(s, set); }, p->value);
    *out = dup_string(s.str());
  });
}

size_t difflab_pointset_size(const difflab_pointset* p) { return p ? base_of(p->value).size() : 0; }

int difflab_pointset_dimension(const difflab_pointset* p) { return p ? base_of(p->value).dimension() : 0; }

int difflab_pointset_is_weighted(const difflab_pointset* p) {
  return p && std::holds_alternative<WeightedPointSet>(p->value) ? 1 : 0;
}

difflab_status difflab_pointset_coords(const difflab_pointset* p, double* xs, double* ys, double* ws) {
  return guarded([&] {
    require_ptr(p, "pointset");
    require_ptr(xs, "xs");
    const auto pts = base_of(p->value).points();
    const auto* weighted = std::get_if<WeightedPointSet>(&p->value);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      xs[i] = pts[i].x;
      if (ys) ys[i] = pts[i].y;
      if (ws) ws[i] = weighted ? weighted->weights()[i] : 1.0;
    }
  });
}

difflab_status difflab_pointset_window(const difflab_pointset* p, char** out) {
  return guarded([&] {
    require_ptr(p, "pointset");
    require_ptr(out, "out");
    *out = dup_string(base_of(p->value).window().describe());
  });
}

void difflab_pointset_free(difflab_pointset* p) { delete p; }

difflab_status difflab_theory(const char* model_json, const char* stat, const char* grid, difflab_grid** out,
                              char** atoms_json) {
  return guarded([&] {
    require_ptr(model_json, "model_json");
    require_ptr(stat, "stat");
    require_ptr(grid, "grid");
    require_ptr(out, "out");
    const ModelSpec spec = parse_model_json(model_json);
    const Stat s = parse_stat(stat);
    const Grid g = Grid::parse(grid);
    const double reach = std::max(std::abs(g.min), std::abs(g.max));
    const SpectralMeasure m = model_measure(spec, s, reach + 1.0);
    std::vector<double> values(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) values[i] = m.density(g.at(i));
    std::string atoms;
    if (atoms_json) {
      nlohmann::ordered_json j;
      j["label"] = m.label;
      auto list = nlohmann::ordered_json::array();
      for (const auto& a : m.atoms) list.push_back({{"location", a.location}, {"intensity", a.intensity}});
      j["atoms"] = list;
      j["comb"] = m.comb ? nlohmann::ordered_json{{"spacing", m.comb->spacing}, {"intensity", m.comb->intensity}}
                         : nlohmann::ordered_json(nullptr);
      atoms = j.dump(2) + "\n";
    }
    auto* handle = new difflab_grid{GridFunction(g, std::move(values))};
    if (atoms_json) *atoms_json = dup_string(atoms);
    *out = handle;
  });
}

difflab_status difflab_estimate(const difflab_pointset* p, const char* estimator_json, difflab_grid** out) {
  return guarded([&] {
    require_ptr(p, "pointset");
    require_ptr(estimator_json, "estimator_json");
    require_ptr(out, "out");
    *out = new difflab_grid{estimate(p->value, estimator_from_json(estimator_json))};
  });
}

difflab_status difflab_grid_read_csv(const char* path, difflab_grid** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new difflab_grid{read_grid_csv_file(path)};
  });
}

difflab_status difflab_grid_write_csv(const difflab_grid* g, const char* path) {
  return guarded([&] {
    require_ptr(g, "grid");
    require_ptr(path, "path");
    write_csv_file(path, g->value);
  });
}

size_t difflab_grid_size(const difflab_grid* g) { return g ? g->value.size() : 0; }

int difflab_grid_has_stderr(const difflab_grid* g) { return g && g->value.has_standard_errors() ? 1 : 0; }

difflab_status difflab_grid_values(const difflab_grid* g, double* abscissae, double* values, double* stderrs) {
  return guarded([&] {
    require_ptr(g, "grid");
    const auto& f = g->value;
    if (stderrs && !f.has_standard_errors()) fail(ErrorCode::InvalidArgument, "grid function has no standard errors");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (abscissae) abscissae[i] = f.abscissa(i);
      if (values) values[i] = f.value(i);
      if (stderrs) stderrs[i] = f.standard_errors()[i];
    }
  });
}

void difflab_grid_free(difflab_grid* g) { delete g; }

difflab_status difflab_config_normalise(const char* text, char** out) {
  return guarded([&] {
    require_ptr(text, "text");
    require_ptr(out, "out");
    *out = dup_string(serialise_config(parse_config(text)));
  });
}

difflab_status difflab_config_to_json(const char* text, char** out) {
  return guarded([&] {
    require_ptr(text, "text");
    require_ptr(out, "out");
    *out = dup_string(config_json(parse_config(text)));
  });
}

difflab_status difflab_experiment_run(const char* config_text, int threads, const char* out_dir,
                                      difflab_report** out) {
  return guarded([&] {
    require_ptr(config_text, "config_text");
    require_ptr(out, "out");
    ExperimentConfig c = parse_config(config_text);
    if (threads > 0) c.verify.threads = threads;
    if (out_dir) c.verify.out_dir = out_dir;
    *out = new difflab_report{run_experiment(c)};
  });
}

difflab_status difflab_report_json(const difflab_report* r, char** out) {
  return guarded([&] {
    require_ptr(r, "report");
    require_ptr(out, "out");
    *out = dup_string(report_json(r->value));
  });
}

int difflab_report_pass(const difflab_report* r) { return r && r->value.pass ? 1 : 0; }

void difflab_report_free(difflab_report* r) { delete r; }

difflab_status difflab_reproduce_figures(const char* out_dir) {
  return guarded([&] {
    require_ptr(out_dir, "out_dir");
    reproduce_figures(out_dir);
  });
}

difflab_status difflab_dyson_f(int beta, double r, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = dyson_f(beta, r);
  });
}

difflab_status difflab_dyson_h(int beta, double k, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = dyson_h(beta, k);
  });
}

difflab_status difflab_ginibre(double t, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    if (t < 0.0) fail(ErrorCode::NegativeArgument, "radius must be nonnegative");
    *out = ginibre_h(t);
  });
}

difflab_status difflab_renewal_backscatter(const char* waiting, double k, double* out) {
  return guarded([&] {
    require_ptr(waiting, "waiting");
    require_ptr(out, "out");
    *out = renewal_backscatter(parse_waiting(waiting), k);
  });
}

}  // extern "C"
