#include "difflab/figures.hpp"

#include <json.hpp>

#include "difflab/io.hpp"
#include "difflab/theory.hpp"

namespace difflab {

namespace {

using nlohmann::ordered_json;

GridFunction tabulate(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.at(i));
  return GridFunction(g, std::move(v));
}

// One line layer per CSV, coloured by a constant "curve" field.
ordered_json line_chart(const std::string& title, const std::string& x_title, const std::string& y_title,
                        const std::vector<std::pair<std::string, std::string>>& curves, double y_min,
                        double y_max) {
  ordered_json layers = ordered_json::array();
  for (const auto& [file, label] : curves) {
    ordered_json layer;
    layer["data"] = {{"url", file}, {"format", {{"type", "csv"}}}};
    layer["transform"] = ordered_json::array({{{"calculate", "'" + label + "'"}, {"as", "curve"}}});
    layer["mark"] = {{"type", "line"}, {"clip", true}};
    layer["encoding"] = {
        {"x", {{"field", "abscissa"}, {"type", "quantitative"}, {"title", x_title}}},
        {"y",
         {{"field", "value"},
          {"type", "quantitative"},
          {"title", y_title},
          {"scale", {{"domain", {y_min, y_max}}}}}},
        {"color", {{"field", "curve"}, {"type", "nominal"}}},
    };
    layers.push_back(layer);
  }
  ordered_json spec;
  spec["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";
  spec["title"] = title;
  spec["width"] = 400;
  spec["height"] = 300;
  spec["layer"] = layers;
  return spec;
}

}  // namespace

Grid figure_autocorrelation_grid() { return Grid::make(0.0, 5.0, 501); }
Grid figure_diffraction_grid() { return Grid::make(-3.0, 3.0, 1200); }
Grid figure_ginibre_grid() { return Grid::make(0.0, 3.0, 301); }

std::vector<std::filesystem::path> reproduce_figures(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const GridFunction& g) {
    write_csv_file(out_dir / name, g);
    written.push_back(out_dir / name);
  };
  std::vector<std::pair<std::string, std::string>> auto_curves, diff_curves;
  for (int beta : {1, 2, 4}) {
    const std::string b = std::to_string(beta);
    emit("autocorrelation_beta" + b + ".csv",
         tabulate(figure_autocorrelation_grid(), [beta](double r) { return 1.0 - dyson_f(beta, r); }));
    emit("diffraction_beta" + b + ".csv",
         tabulate(figure_diffraction_grid(), [beta](double k) { return dyson_h(beta, k); }));
    auto_curves.push_back({"autocorrelation_beta" + b + ".csv", "beta = " + b});
    diff_curves.push_back({"diffraction_beta" + b + ".csv", "beta = " + b});
  }
  emit("ginibre.csv", tabulate(figure_ginibre_grid(), ginibre_h));

  auto emit_spec = [&](const std::string& name, const ordered_json& spec) {
    write_text_file(out_dir / name, spec.dump(2) + "\n");
    written.push_back(out_dir / name);
  };
  emit_spec("autocorrelation.vl.json",
            line_chart("Pair correlation 1 - f_beta(r)", "r", "1 - f(r)", auto_curves, 0.0, 1.3));
  // beta = 4 grows without bound at |k| = 1; the y scale clips it.
  emit_spec("diffraction.vl.json", line_chart("Diffuse diffraction h_beta(k)", "k", "h(k)", diff_curves, 0.0, 2.0));
  emit_spec("ginibre.vl.json",
            line_chart("Ginibre: 1 - exp(-pi t^2)", "t", "density", {{"ginibre.csv", "ginibre"}}, 0.0, 1.1));
  return written;
}

}  // namespace difflab
