#include "difflab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace difflab {

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double to_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  }
  return v;
}

void write_points(std::ostream& out, const PointSet& p, const double* weights) {
  out << "# window: " << p.window().describe() << '\n';
  const bool planar = p.dimension() == 2;
  out << (planar ? "x,y" : "x") << (weights ? ",w" : "") << '\n';
  auto pts = p.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << format_number(pts[i].x);
    if (planar) out << ',' << format_number(pts[i].y);
    if (weights) out << ',' << format_number(weights[i]);
    out << '\n';
  }
}

}  // namespace

void write_csv(std::ostream& out, const PointSet& p) { write_points(out, p, nullptr); }

void write_csv(std::ostream& out, const WeightedPointSet& p) { write_points(out, p.base(), p.weights().data()); }

void write_csv(std::ostream& out, const GridFunction& g) {
  const bool with_err = g.has_standard_errors();
  out << (with_err ? "abscissa,value,stderr" : "abscissa,value") << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_number(g.abscissa(i)) << ',' << format_number(g.value(i));
    if (with_err) out << ',' << format_number(g.standard_errors()[i]);
    out << '\n';
  }
}

AnyPointSet read_point_csv(std::istream& in) {
  std::string line;
  std::optional<Window> window;
  std::vector<std::string> header;
  std::vector<Vec2> pts;
  std::vector<double> weights;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string tag = "# window:";
      if (line.rfind(tag, 0) == 0) window = Window::parse(line.substr(tag.size()));
      continue;
    }
    if (header.empty()) {
      header = split_commas(line);
      const bool ok = header == std::vector<std::string>{"x"} || header == std::vector<std::string>{"x", "y"} ||
                      header == std::vector<std::string>{"x", "w"} ||
                      header == std::vector<std::string>{"x", "y", "w"};
      if (!ok) fail(ErrorCode::Io, "unrecognised point CSV header '" + line + "'");
      continue;
    }
    auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                              " columns");
    }
    Vec2 p{to_double(cells[0], line_no), 0.0};
    std::size_t next = 1;
    if (header.size() > 1 && header[1] == "y") p.y = to_double(cells[next++], line_no);
    if (header.back() == "w") weights.push_back(to_double(cells[next], line_no));
    pts.push_back(p);
  }
  if (!window) fail(ErrorCode::Io, "point CSV lacks a '# window: <kind> <size>' line");
  if (header.empty()) fail(ErrorCode::Io, "point CSV lacks a header");
  const int dim = header.size() > 1 && header[1] == "y" ? 2 : 1;
  if (dim != window->dimension()) fail(ErrorCode::Io, "CSV columns do not match the window dimension");
  PointSet base(*window, std::move(pts));
  if (header.back() == "w") return WeightedPointSet(std::move(base), std::move(weights));
  return base;
}

GridFunction read_grid_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::vector<double> xs, values, errs;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_commas(line);
      if (header != std::vector<std::string>{"abscissa", "value"} &&
          header != std::vector<std::string>{"abscissa", "value", "stderr"}) {
        fail(ErrorCode::Io, "unrecognised grid CSV header '" + line + "'");
      }
      continue;
    }
    auto cells = split_commas(line);
    if (cells.size() != header.size()) fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": wrong column count");
    xs.push_back(to_double(cells[0], line_no));
    values.push_back(to_double(cells[1], line_no));
    if (header.size() == 3) errs.push_back(to_double(cells[2], line_no));
  }
  if (xs.empty()) fail(ErrorCode::Io, "grid CSV has no rows");
  Grid grid = Grid::make(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double scale = std::max(1.0, std::abs(grid.at(i)));
    if (std::abs(xs[i] - grid.at(i)) > 1e-9 * scale) fail(ErrorCode::Io, "grid CSV abscissae are not uniform");
  }
  std::optional<std::vector<double>> se;
  if (header.size() == 3) se = std::move(errs);
  return GridFunction(grid, std::move(values), std::move(se));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void write_csv_file(const std::filesystem::path& path, const PointSet& p) {
  auto out = open_out(path);
  write_csv(out, p);
}

void write_csv_file(const std::filesystem::path& path, const WeightedPointSet& p) {
  auto out = open_out(path);
  write_csv(out, p);
}

void write_csv_file(const std::filesystem::path& path, const GridFunction& g) {
  auto out = open_out(path);
  write_csv(out, g);
}

AnyPointSet read_point_csv_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_point_csv(in);
}

GridFunction read_grid_csv_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_grid_csv(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace difflab
