#pragma once

// CSV exchange formats.
//
//   PointSet:          "# window: <kind> <size>" then header "x" or "x,y"
//   WeightedPointSet:  same, with an extra "w" column
//   GridFunction:      header "abscissa,value" or "abscissa,value,stderr"
//
// Numbers are written in shortest round-trip form, so identical inputs give
// byte-identical files.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "difflab/core.hpp"

namespace difflab {

using AnyPointSet = std::variant<PointSet, WeightedPointSet>;

void write_csv(std::ostream& out, const PointSet& p);
void write_csv(std::ostream& out, const WeightedPointSet& p);
void write_csv(std::ostream& out, const GridFunction& g);

AnyPointSet read_point_csv(std::istream& in);
GridFunction read_grid_csv(std::istream& in);

void write_csv_file(const std::filesystem::path& path, const PointSet& p);
void write_csv_file(const std::filesystem::path& path, const WeightedPointSet& p);
void write_csv_file(const std::filesystem::path& path, const GridFunction& g);
AnyPointSet read_point_csv_file(const std::filesystem::path& path);
GridFunction read_grid_csv_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double v);

}  // namespace difflab
