#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rankfield/persistence.hpp"
#include "rankfield/point_pattern.hpp"
#include "rankfield/rankspace.hpp"

namespace rankfield {

// Text helpers shared by the file formats.
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);
double parse_double(std::string_view text);  ///< accepts "inf"; throws InvalidArgument
long long parse_int(std::string_view text);

/// Shortest round-trip representation; integral values keep a ".0" and
/// infinity prints as "inf".
std::string format_double(double v);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// Point files: one point per line, 2 or 3 columns, optional header
// "# window xmin xmax ymin ymax [zmin zmax]". Without a header the window is
// the bounding box of the points.
std::string format_points(const PointPattern& pattern);
PointPattern parse_points(std::string_view text, const std::string& source = "<memory>");
PointPattern read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, const PointPattern& pattern);

// Diagram files: header "dim,birth,death", then one row per point; essential
// classes have death "inf".
std::string format_diagram(const PersistenceDiagram& diagram);
PersistenceDiagram parse_diagram(std::string_view text, const std::string& source = "<memory>");
PersistenceDiagram read_diagram(const std::filesystem::path& path);
void write_diagram(const std::filesystem::path& path, const PersistenceDiagram& diagram);

// Grid-function files: "#" header lines recording grid, homology dimension
// and weight, then "x,y,value" rows in storage order.
std::string format_grid_function(const GridFunction& f, const WeightFunction& phi,
                                  std::string_view kind = "rank-function");
GridFunction parse_grid_function(std::string_view text, const std::string& source = "<memory>",
                                 WeightFunction* phi = nullptr);
GridFunction read_grid_function(const std::filesystem::path& path, WeightFunction* phi = nullptr);
void write_grid_function(const std::filesystem::path& path, const GridFunction& f,
                         const WeightFunction& phi, std::string_view kind = "rank-function");

/// gnuplot "matrix" layout: row j is y = node(j), column i is x = node(i);
/// nodes below the diagonal are NaN.
std::string format_matrix(const GridFunction& f);

}  // namespace rankfield
