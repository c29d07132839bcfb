#include "difflab/config.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

#include "difflab/io.hpp"

namespace difflab {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::Config, field + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Drops a trailing '#' comment that is not inside a string literal.
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

ordered_json parse_sectioned(std::string_view text) {
  ordered_json doc = ordered_json::object();
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (doc.contains(section)) config_error(where, "duplicate section [" + section + "]");
      doc[section] = ordered_json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where, "expected key = value");
    if (section.empty()) config_error(where, "key outside of a section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) config_error(where, "empty key");
    if (doc[section].contains(key)) config_error(section + "." + key, "given twice");
    try {
      doc[section][key] = ordered_json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      config_error(section + "." + key, "value is not a JSON literal: " + value);
    }
  }
  return doc;
}

// Typed access with field-qualified errors; tracks which keys were consumed.
class Section {
 public:
  Section(const ordered_json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      if (!doc.at(name_).is_object()) config_error(name_, "must be a table");
      obj_ = doc.at(name_);
    } else {
      obj_ = ordered_json::object();
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  std::string field(const std::string& key) const { return name_ + "." + key; }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto* v = take(key);
    if (!v) return required(key, fallback);
    if (!v->is_number()) config_error(field(key), "expected a number");
    return v->get<double>();
  }
  long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt) {
    const auto* v = take(key);
    if (!v) return required(key, fallback);
    if (!v->is_number_integer()) config_error(field(key), "expected an integer");
    return v->get<long long>();
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const auto* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) config_error(field(key), "expected a nonnegative integer");
    return v->get<std::uint64_t>();
  }
  bool boolean(const std::string& key, bool fallback) {
    const auto* v = take(key);
    if (!v) return fallback;
    if (!v->is_boolean()) config_error(field(key), "expected true or false");
    return v->get<bool>();
  }
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const auto* v = take(key);
    if (!v) return required(key, fallback);
    if (!v->is_string()) config_error(field(key), "expected a string");
    return v->get<std::string>();
  }
  const ordered_json* take(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.push_back(key);
    return &obj_.at(key);
  }
  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) config_error(field(key), "unknown key");
    }
  }

 private:
  template <class T>
  T required(const std::string& key, const std::optional<T>& fallback) const {
    if (!fallback) config_error(field(key), "missing");
    return *fallback;
  }

  std::string name_;
  ordered_json obj_;
  std::vector<std::string> used_;
};

template <class F>
auto wrap(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    config_error(field, e.what());
  }
}

// Rational given as "3/2" (exact) or a plain number.
struct ParsedValue {
  double value;
  std::optional<Rational> exact;
};

ParsedValue parse_value(const ordered_json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), std::nullopt};
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (auto r = Rational::parse(s)) return {r->value(), r};
    config_error(field, "expected a number or a rational like \"3/2\", got \"" + s + "\"");
  }
  config_error(field, "expected a number or a rational string");
}

WaitingDistribution waiting_from(Section& s) {
  const std::string kind = s.string("kind", "exponential");
  WaitingDistribution mu = WaitingDistribution::exponential();
  if (kind == "exponential") {
    const double rate = s.number("rate", 1.0);
    mu = wrap(s.field("rate"), [&] { return WaitingDistribution::exponential(rate); });
  } else if (kind == "gamma") {
    const double shape = s.number("shape");
    const double rate = s.number("rate", 1.0);
    mu = wrap(s.field("shape"), [&] { return WaitingDistribution::gamma(shape, rate); });
  } else if (kind == "uniform") {
    const double a = s.number("a");
    const double b = s.number("b");
    mu = wrap(s.field("a"), [&] { return WaitingDistribution::uniform(a, b); });
  } else if (kind == "discrete") {
    const auto* atoms = s.take("atoms");
    if (!atoms || !atoms->is_array() || atoms->empty()) {
      config_error(s.field("atoms"), "expected a nonempty list of [location, probability] pairs");
    }
    std::vector<WaitingDistribution::DiscreteAtom> list;
    for (std::size_t i = 0; i < atoms->size(); ++i) {
      const auto& a = (*atoms)[i];
      const std::string f = s.field("atoms") + "[" + std::to_string(i) + "]";
      if (!a.is_array() || a.size() != 2) config_error(f, "expected [location, probability]");
      const auto loc = parse_value(a[0], f);
      const auto p = parse_value(a[1], f);
      list.push_back({loc.value, p.value, loc.exact, p.exact});
    }
    mu = wrap(s.field("atoms"), [&] { return WaitingDistribution::discrete(std::move(list)); });
  } else {
    config_error(s.field("kind"), "unknown waiting law \"" + kind + "\"");
  }
  s.finish();
  return mu;
}

ordered_json waiting_to(const WaitingDistribution& mu) {
  ordered_json j;
  j["kind"] = mu.kind_name();
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, WaitingDistribution::Exponential>) {
          j["rate"] = law.rate;
        } else if constexpr (std::is_same_v<T, WaitingDistribution::Gamma>) {
          j["shape"] = law.shape;
          j["rate"] = law.rate;
        } else if constexpr (std::is_same_v<T, WaitingDistribution::Uniform>) {
          j["a"] = law.a;
          j["b"] = law.b;
        } else {
          auto atoms = ordered_json::array();
          for (const auto& a : law.atoms) {
            ordered_json loc = a.exact_location ? ordered_json(a.exact_location->str()) : ordered_json(a.location);
            ordered_json p =
                a.exact_probability ? ordered_json(a.exact_probability->str()) : ordered_json(a.probability);
            atoms.push_back({loc, p});
          }
          j["atoms"] = atoms;
        }
      },
      mu.law());
  return j;
}

int dimension_from(Section& s) {
  const auto d = s.integer("dim", 1);
  if (d != 1 && d != 2) config_error(s.field("dim"), "must be 1 or 2");
  return static_cast<int>(d);
}

// Reads the [model] table (and [waiting] for renewal from `doc`).
std::pair<ModelSpec, std::optional<Window>> model_from(const ordered_json& doc) {
  Section s(doc, "model");
  const std::string name = s.string("name");
  std::optional<Window> window;
  if (s.has("window")) {
    const std::string w = s.string("window");
    window = wrap(s.field("window"), [&] { return Window::parse(w); });
  }
  ModelSpec spec;
  if (name == "poisson") {
    const double rho = s.number("rho", 1.0);
    spec = model::Poisson{rho, dimension_from(s)};
  } else if (name == "marked_poisson") {
    const double rho = s.number("rho", 1.0);
    spec = model::MarkedPoisson{rho, dimension_from(s)};
  } else if (name == "matern") {
    const double rho = s.number("rho", 1.0);
    const double hardcore = s.number("hardcore");
    spec = model::Matern{rho, hardcore, dimension_from(s)};
  } else if (name == "renewal") {
    Section w(doc, "waiting");
    spec = model::Renewal{waiting_from(w)};
  } else if (name == "dyson") {
    const auto beta = s.integer("beta", 2);
    const auto n = s.integer("n", 2048);
    const double keep = s.number("keep", 0.1);
    spec = model::BetaBulk{static_cast<int>(beta), static_cast<int>(n), keep};
  } else if (name == "ginibre") {
    const auto n = s.integer("n", 512);
    const double keep = s.number("keep", 0.5);
    spec = model::Ginibre{static_cast<int>(n), keep};
  } else {
    config_error(s.field("name"), "unknown model \"" + name + "\"");
  }
  s.finish();
  if (name != "renewal" && doc.contains("waiting")) config_error("waiting", "only valid for the renewal model");
  wrap("model", [&] {
    validate(spec);
    return 0;
  });
  const bool random_matrix = name == "dyson" || name == "ginibre";
  if (random_matrix && window) config_error(s.field("window"), "fixed by n and keep for this model");
  if (window && window->dimension() != model_dimension(spec)) {
    config_error(s.field("window"), "dimension does not match the model");
  }
  return {spec, window};
}

ordered_json model_to(const ModelSpec& spec, const std::optional<Window>& window, ordered_json* waiting) {
  ordered_json m;
  m["name"] = model_name(spec);
  std::visit(
      [&](const auto& mod) {
        using T = std::decay_t<decltype(mod)>;
        if constexpr (std::is_same_v<T, model::Poisson> || std::is_same_v<T, model::MarkedPoisson>) {
          m["rho"] = mod.rho;
          m["dim"] = mod.dim;
        } else if constexpr (std::is_same_v<T, model::Matern>) {
          m["rho"] = mod.rho;
          m["hardcore"] = mod.hardcore;
          m["dim"] = mod.dim;
        } else if constexpr (std::is_same_v<T, model::Renewal>) {
          if (waiting) *waiting = waiting_to(mod.waiting);
        } else if constexpr (std::is_same_v<T, model::BetaBulk>) {
          m["beta"] = mod.beta;
          m["n"] = mod.n;
          m["keep"] = mod.keep;
        } else {
          m["n"] = mod.n;
          m["keep"] = mod.keep;
        }
      },
      spec);
  if (window) m["window"] = window->describe();
  return m;
}

Band band_from(const ordered_json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    config_error(field, "expected [lo, hi]");
  }
  Band b{v[0].get<double>(), v[1].get<double>()};
  if (!(b.hi > b.lo)) config_error(field, "needs lo < hi");
  return b;
}

ExperimentConfig config_from(const ordered_json& doc) {
  if (!doc.is_object()) config_error("config", "must be a table");
  for (const auto& [key, _] : doc.items()) {
    if (key != "model" && key != "waiting" && key != "estimator" && key != "verify") {
      config_error(key, "unknown section");
    }
  }
  if (!doc.contains("model")) config_error("model", "section missing");
  ExperimentConfig c;
  std::tie(c.model, c.window) = model_from(doc);

  Section e(doc, "estimator");
  const std::string stat = e.string("stat", "diffraction");
  c.estimator.stat = wrap(e.field("stat"), [&] { return parse_stat(stat); });
  if (e.has("grid")) {
    const std::string g = e.string("grid");
    c.estimator.grid = wrap(e.field("grid"), [&] { return Grid::parse(g); });
  }
  c.estimator.r_max = e.number("r_max", c.estimator.r_max);
  if (!(c.estimator.r_max > 0.0)) config_error(e.field("r_max"), "must be positive");
  const auto bins = e.integer("bins", static_cast<long long>(c.estimator.bins));
  if (bins < 1) config_error(e.field("bins"), "must be at least 1");
  c.estimator.bins = static_cast<std::size_t>(bins);
  auto& po = c.estimator.periodogram;
  po.band = e.number("band", po.band);
  po.remove_mean = e.boolean("remove_mean", po.remove_mean);
  po.taper = e.boolean("taper", po.taper);
  const auto dirs = e.integer("directions", po.directions);
  if (dirs < 1) config_error(e.field("directions"), "must be at least 1");
  po.directions = static_cast<int>(dirs);
  if (po.taper && po.remove_mean) config_error(e.field("taper"), "cannot be combined with remove_mean");
  e.finish();

  Section v(doc, "verify");
  const auto replicas = v.integer("replicas", c.verify.replicas);
  if (replicas < 1) config_error(v.field("replicas"), "must be at least 1");
  c.verify.replicas = static_cast<int>(replicas);
  c.verify.seed = v.unsigned_integer("seed", c.verify.seed);
  if (v.has("tol_sup")) {
    c.verify.tol_sup = v.number("tol_sup");
    if (!(*c.verify.tol_sup >= 0.0)) config_error(v.field("tol_sup"), "must be nonnegative");
  }
  c.verify.z_cap = v.number("z_cap", c.verify.z_cap);
  if (!(c.verify.z_cap > 0.0)) config_error(v.field("z_cap"), "must be positive");
  if (const auto* ex = v.take("exclude")) {
    if (!ex->is_array()) config_error(v.field("exclude"), "expected a list of [lo, hi] bands");
    std::vector<Band> bands;
    for (std::size_t i = 0; i < ex->size(); ++i) {
      bands.push_back(band_from((*ex)[i], v.field("exclude") + "[" + std::to_string(i) + "]"));
    }
    c.verify.exclude = std::move(bands);
  }
  if (const auto* r = v.take("range")) c.verify.range = band_from(*r, v.field("range"));
  const auto threads = v.integer("threads", c.verify.threads);
  if (threads < 0) config_error(v.field("threads"), "must be nonnegative");
  c.verify.threads = static_cast<int>(threads);
  c.verify.out_dir = v.string("out_dir", c.verify.out_dir);
  v.finish();

  const bool needs_window = !std::holds_alternative<model::BetaBulk>(c.model) &&
                            !std::holds_alternative<model::Ginibre>(c.model);
  if (needs_window && !c.window) config_error("model.window", "missing");
  return c;
}

ordered_json config_to(const ExperimentConfig& c) {
  ordered_json doc;
  ordered_json waiting;
  doc["model"] = model_to(c.model, c.window, &waiting);
  if (!waiting.is_null()) doc["waiting"] = waiting;

  ordered_json e;
  e["stat"] = stat_name(c.estimator.stat);
  e["grid"] = c.estimator.grid.describe();
  e["r_max"] = c.estimator.r_max;
  e["bins"] = c.estimator.bins;
  e["band"] = c.estimator.periodogram.band;
  e["remove_mean"] = c.estimator.periodogram.remove_mean;
  e["taper"] = c.estimator.periodogram.taper;
  e["directions"] = c.estimator.periodogram.directions;
  doc["estimator"] = e;

  ordered_json v;
  v["replicas"] = c.verify.replicas;
  v["seed"] = c.verify.seed;
  if (c.verify.tol_sup) v["tol_sup"] = *c.verify.tol_sup;
  v["z_cap"] = c.verify.z_cap;
  if (c.verify.exclude) {
    auto bands = ordered_json::array();
    for (const auto& b : *c.verify.exclude) bands.push_back({b.lo, b.hi});
    v["exclude"] = bands;
  }
  if (c.verify.range) v["range"] = {c.verify.range->lo, c.verify.range->hi};
  v["threads"] = c.verify.threads;
  v["out_dir"] = c.verify.out_dir;
  doc["verify"] = v;
  return doc;
}

ordered_json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(what, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') return config_from(parse_json_text(body, "config"));
  return config_from(parse_sectioned(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

std::string serialise_config(const ExperimentConfig& config) {
  const auto doc = config_to(config);
  std::string out;
  bool first = true;
  for (const auto& [section, table] : doc.items()) {
    if (!first) out += "\n";
    first = false;
    out += "[" + section + "]\n";
    for (const auto& [key, value] : table.items()) out += key + " = " + value.dump() + "\n";
  }
  return out;
}

std::string config_json(const ExperimentConfig& config) { return config_to(config).dump(2) + "\n"; }

ModelSpec parse_model_json(std::string_view json) {
  const auto j = parse_json_text(json, "model");
  if (!j.is_object()) config_error("model", "must be a JSON object");
  ordered_json doc;
  ordered_json m = j;
  if (m.contains("waiting")) {
    // Either a [waiting] table or the compact "discrete 1/2:1/2 ..." form.
    doc["waiting"] = m["waiting"].is_string()
                         ? wrap("waiting", [&] { return waiting_to(parse_waiting(m["waiting"].get<std::string>())); })
                         : m["waiting"];
    m.erase("waiting");
  }
  doc["model"] = m;
  return model_from(doc).first;
}

std::string model_json(const ModelSpec& spec) {
  ordered_json waiting;
  auto m = model_to(spec, std::nullopt, &waiting);
  if (!waiting.is_null()) m["waiting"] = waiting;
  return m.dump();
}

WaitingDistribution parse_waiting(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string kind;
  in >> kind;
  std::vector<std::string> args;
  for (std::string a; in >> a;) args.push_back(a);
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(args.at(i), &used);
      if (used != args[i].size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "waiting law \"" + std::string(text) + "\": bad number");
    }
  };
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      fail(ErrorCode::InvalidArgument, "waiting law \"" + std::string(text) + "\": wrong number of parameters");
    }
  };
  if (kind == "exponential") {
    arity(0, 1);
    return WaitingDistribution::exponential(args.empty() ? 1.0 : num(0));
  }
  if (kind == "gamma") {
    arity(1, 2);
    return WaitingDistribution::gamma(num(0), args.size() > 1 ? num(1) : 1.0);
  }
  if (kind == "uniform") {
    arity(2, 2);
    return WaitingDistribution::uniform(num(0), num(1));
  }
  if (kind == "discrete") {
    if (args.empty()) fail(ErrorCode::InvalidArgument, "discrete law needs location:probability atoms");
    std::vector<WaitingDistribution::DiscreteAtom> atoms;
    for (const auto& a : args) {
      const auto colon = a.find(':');
      if (colon == std::string::npos) fail(ErrorCode::InvalidArgument, "atom \"" + a + "\" is not location:probability");
      auto part = [&](const std::string& s) -> ParsedValue {
        if (auto r = Rational::parse(s)) return {r->value(), r};
        try {
          std::size_t used = 0;
          const double v = std::stod(s, &used);
          if (used == s.size()) return {v, std::nullopt};
        } catch (const std::exception&) {
        }
        fail(ErrorCode::InvalidArgument, "atom \"" + a + "\": bad number \"" + s + "\"");
      };
      const auto loc = part(a.substr(0, colon));
      const auto p = part(a.substr(colon + 1));
      atoms.push_back({loc.value, p.value, loc.exact, p.exact});
    }
    return WaitingDistribution::discrete(std::move(atoms));
  }
  fail(ErrorCode::InvalidArgument, "unknown waiting law \"" + kind + "\"");
}

std::string describe_waiting(const WaitingDistribution& mu) {
  return std::visit(
      [&](const auto& law) -> std::string {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, WaitingDistribution::Exponential>) {
          return "exponential " + format_number(law.rate);
        } else if constexpr (std::is_same_v<T, WaitingDistribution::Gamma>) {
          return "gamma " + format_number(law.shape) + " " + format_number(law.rate);
        } else if constexpr (std::is_same_v<T, WaitingDistribution::Uniform>) {
          return "uniform " + format_number(law.a) + " " + format_number(law.b);
        } else {
          std::string s = "discrete";
          for (const auto& a : law.atoms) {
            s += " " + (a.exact_location ? a.exact_location->str() : format_number(a.location)) + ":" +
                 (a.exact_probability ? a.exact_probability->str() : format_number(a.probability));
          }
          return s;
        }
      },
      mu.law());
}

}  // namespace difflab
