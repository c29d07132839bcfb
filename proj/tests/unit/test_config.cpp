#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "difflab/config.hpp"
#include "difflab/io.hpp"

using namespace difflab;

namespace {

const char* kTiling = R"(
# gaps 1/2 or 3/2
[model]
name = "renewal"
window = "interval 10000"

[waiting]
kind = "discrete"
atoms = [["1/2", "1/2"], ["3/2", "1/2"]]

[estimator]
stat = "diffraction"
grid = "0.1:5:99"
taper = true

[verify]
replicas = 20
seed = 12345
exclude = [[1.9, 2.1]]
)";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("sectioned config") {
  const ExperimentConfig c = parse_config(kTiling);
  const auto& r = std::get<model::Renewal>(c.model);
  REQUIRE(r.waiting.as_discrete());
  CHECK(r.waiting.as_discrete()->atoms[1].exact_location == Rational{3, 2});
  CHECK(c.window == Window::interval(10000.0));
  CHECK(c.estimator.grid == Grid::make(0.1, 5.0, 99));
  CHECK(c.estimator.periodogram.taper);
  CHECK(c.verify.replicas == 20);
  REQUIRE(c.verify.exclude);
  CHECK(c.verify.exclude->at(0) == Band{1.9, 2.1});
  CHECK_FALSE(c.verify.tol_sup.has_value());
}

TEST_CASE("defaults") {
  const ExperimentConfig c = parse_config("[model]\nname = \"poisson\"\nwindow = \"interval 100\"\n");
  CHECK(c.verify.seed == 12345);
  CHECK(c.verify.replicas == 20);
  CHECK(c.verify.z_cap == 4.0);
  CHECK(c.estimator.stat == Stat::Diffraction);
  CHECK(c.estimator.bins == kDefaultBins);
}

TEST_CASE("serialisation round-trips") {
  for (const std::string text :
       {std::string(kTiling),
        std::string("[model]\nname = \"dyson\"\nbeta = 4\nn = 512\nkeep = 0.25\n[estimator]\nstat = "
                    "\"paircorr\"\nr_max = 3\nbins = 12\n[verify]\nrange = [0.1, 3]\ntol_sup = 0.07\n"),
        std::string("[model]\nname = \"matern\"\nrho = 2\nhardcore = 0.3\ndim = 2\nwindow = \"disk 20\"\n"),
        std::string("[model]\nname = \"renewal\"\nwindow = \"interval 50\"\n[waiting]\nkind = \"gamma\"\nshape = 2\n")}) {
    const ExperimentConfig c = parse_config(text);
    const std::string once = serialise_config(c);
    CHECK(serialise_config(parse_config(once)) == once);
    // JSON form carries the same content.
    CHECK(serialise_config(parse_config(config_json(c))) == once);
  }
}

TEST_CASE("errors name the field") {
  CHECK(error_of("[model]\nname = \"poisson\"\nwindow = \"interval 10\"\nrh0 = 1\n").find("rh0") != std::string::npos);
  CHECK(error_of("[model]\nname = \"dyson\"\nbeta = 3\n").find("beta") != std::string::npos);
  CHECK(error_of("[model]\nname = \"poisson\"\nwindow = \"interval 10\"\n[verify]\nreplicas = 0\n").find("replicas") !=
        std::string::npos);
  CHECK(error_of("[model]\nname = \"poisson\"\n").find("window") != std::string::npos);
  CHECK(error_of("[model]\nname = \"ginibre\"\nwindow = \"disk 3\"\n").find("window") != std::string::npos);
  CHECK(error_of("[modle]\nname = \"poisson\"\n") != "");
  CHECK(error_of("[model]\nname = \"poisson\"\nwindow = \"interval 10\"\n[estimator]\ngrid = 5\n").find("grid") !=
        std::string::npos);
  CHECK(error_of("[model]\nname = poisson\n") != "");
}

TEST_CASE("model JSON") {
  const ModelSpec m = parse_model_json(R"({"name": "dyson", "beta": 2, "n": 2048})");
  CHECK(std::get<model::BetaBulk>(m).n == 2048);
  CHECK(std::get<model::BetaBulk>(m).keep == 0.1);
  const ModelSpec r = parse_model_json(R"({"name": "renewal", "waiting": "discrete 1/2:1/2 3/2:1/2"})");
  CHECK(std::get<model::Renewal>(r).waiting.as_discrete()->atoms.size() == 2);
  const ModelSpec t = parse_model_json(R"({"name": "renewal", "waiting": {"kind": "uniform", "a": 0.5, "b": 1.5}})");
  CHECK(std::get<model::Renewal>(t).waiting.kind_name() == "uniform");
  CHECK(parse_model_json(model_json(r)).index() == r.index());
  CHECK_THROWS_AS(parse_model_json(R"({"name": "lattice"})"), Error);
  CHECK_THROWS_AS(parse_model_json("[1, 2]"), Error);
}

TEST_CASE("waiting law text") {
  CHECK(parse_waiting("exponential").kind_name() == "exponential");
  CHECK(parse_waiting("gamma 2").variance() == doctest::Approx(0.5));
  CHECK(parse_waiting("uniform 0.5 1.5").mean() == doctest::Approx(1.0));
  const auto d = parse_waiting("discrete 1/2:1/2 3/2:1/2");
  CHECK(describe_waiting(d) == "discrete 1/2:1/2 3/2:1/2");
  CHECK(parse_waiting(describe_waiting(parse_waiting("gamma 3"))).variance() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(parse_waiting("discrete 1/2:1/3"), Error);
  CHECK_THROWS_AS(parse_waiting("weibull 2"), Error);
}

TEST_CASE("shipped configs parse") {
  const std::filesystem::path dir = DIFFLAB_CONFIG_DIR;
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    const ExperimentConfig c = load_config(entry.path());
    CHECK(c.verify.seed == 12345);
    CHECK(c.verify.replicas >= 20);
    ++seen;
  }
  CHECK(seen >= 14);
}
