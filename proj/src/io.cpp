#include "rankfield/io.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "rankfield/errors.hpp"

namespace rankfield {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  std::string_view s = t;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v)) {
    throw InvalidArgument("not a number: '" + t + "'");
  }
  return v;
}

long long parse_int(std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidArgument("not an integer: '" + t + "'");
  }
  return v;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Iterates over lines, tracking 1-based line numbers.
template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto line = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
    ++line_no;
    f(trim(line), line_no);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

}  // namespace

std::string format_points(const PointPattern& pattern) {
  std::string out = "# window";
  for (int a = 0; a < pattern.dim(); ++a) {
    out += " " + format_double(pattern.window().lower[a]) + " " +
           format_double(pattern.window().upper[a]);
  }
  out += "\n";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto p = pattern.point(i);
    for (int a = 0; a < pattern.dim(); ++a) {
      if (a) out += ',';
      out += format_double(p[a]);
    }
    out += '\n';
  }
  return out;
}

PointPattern parse_points(std::string_view text, const std::string& source) {
  std::vector<double> coords;
  std::optional<Window> window;
  std::size_t window_line = 0;
  int dim = 0;
  for_each_line(text, [&](const std::string& line, std::size_t no) {
    if (line.empty()) return;
    if (line.front() == '#') {
      const auto w = words(line.substr(1));
      if (w.empty() || w[0] != "window") return;
      if (w.size() != 5 && w.size() != 7) {
        throw ParseError(source, no, "window header needs 4 or 6 bounds");
      }
      Window win;
      try {
        for (std::size_t k = 1; k < w.size(); k += 2) {
          win.lower.push_back(parse_double(w[k]));
          win.upper.push_back(parse_double(w[k + 1]));
        }
      } catch (const InvalidArgument& e) {
        throw ParseError(source, no, e.what());
      }
      window = std::move(win);
      window_line = no;
      return;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 2 && cols.size() != 3) {
      throw ParseError(source, no, "expected 2 or 3 columns, got " + std::to_string(cols.size()));
    }
    if (dim == 0) dim = static_cast<int>(cols.size());
    if (static_cast<int>(cols.size()) != dim) {
      throw ParseError(source, no, "inconsistent column count");
    }
    for (const auto& c : cols) {
      double v;
      try {
        v = parse_double(c);
      } catch (const InvalidArgument& e) {
        throw ParseError(source, no, e.what());
      }
      if (!std::isfinite(v)) throw ParseError(source, no, "non-finite coordinate");
      coords.push_back(v);
    }
    if (window && window->dim() == dim &&
        !window->contains(std::span<const double>(coords.data() + coords.size() - dim, dim))) {
      throw ParseError(source, no, "point lies outside the declared window");
    }
  });
  if (dim == 0) dim = window ? window->dim() : 2;
  if (window && window->dim() != dim) {
    throw ParseError(source, window_line, "window dimension does not match the point columns");
  }
  Window w = window ? *window : Window::bounding_box(dim, coords);
  try {
    return PointPattern(dim, std::move(coords), std::move(w));
  } catch (const InvalidArgument& e) {
    throw ParseError(source, window_line, e.what());
  }
}

PointPattern read_points(const std::filesystem::path& path) {
  return parse_points(read_file(path), path.string());
}

void write_points(const std::filesystem::path& path, const PointPattern& pattern) {
  write_file_atomic(path, format_points(pattern));
}

std::string format_diagram(const PersistenceDiagram& diagram) {
  std::string out = "dim,birth,death\n";
  for (const auto& p : diagram.points) {
    out += std::to_string(p.dim) + "," + format_double(p.birth) + "," + format_double(p.death) +
           "\n";
  }
  return out;
}

PersistenceDiagram parse_diagram(std::string_view text, const std::string& source) {
  PersistenceDiagram d;
  for_each_line(text, [&](const std::string& line, std::size_t no) {
    if (line.empty() || line.front() == '#' || line == "dim,birth,death") return;
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw ParseError(source, no, "expected dim,birth,death");
    DiagramPoint p;
    try {
      p.dim = static_cast<int>(parse_int(cols[0]));
      p.birth = parse_double(cols[1]);
      p.death = parse_double(cols[2]);
    } catch (const InvalidArgument& e) {
      throw ParseError(source, no, e.what());
    }
    if (p.dim < 0 || !std::isfinite(p.birth) || !(p.birth <= p.death)) {
      throw ParseError(source, no, "invalid diagram point");
    }
    d.points.push_back(p);
  });
  return d;
}

PersistenceDiagram read_diagram(const std::filesystem::path& path) {
  return parse_diagram(read_file(path), path.string());
}

void write_diagram(const std::filesystem::path& path, const PersistenceDiagram& diagram) {
  write_file_atomic(path, format_diagram(diagram));
}

std::string format_grid_function(const GridFunction& f, const WeightFunction& phi,
                                 std::string_view kind) {
  const auto& g = f.grid;
  std::string out;
  out += "# rankfield " + std::string(kind) + "\n";
  out += "# grid " + format_double(g.lower) + " " + format_double(g.upper) + " " +
         std::to_string(g.resolution) + "\n";
  out += "# dim " + std::to_string(f.dim) + "\n";
  out += "# phi " + phi.to_string() + "\n";
  out += "x,y,value\n";
  for (int i = 0; i < g.resolution; ++i) {
    const std::string x = format_double(g.node(i));
    for (int j = i; j < g.resolution; ++j) {
      out += x + "," + format_double(g.node(j)) + "," + format_double(f.at(i, j)) + "\n";
    }
  }
  return out;
}

GridFunction parse_grid_function(std::string_view text, const std::string& source,
                                 WeightFunction* phi) {
  std::optional<Grid> grid;
  std::optional<int> dim;
  std::vector<double> values;
  int row_i = 0, row_j = 0;
  for_each_line(text, [&](const std::string& line, std::size_t no) {
    if (line.empty()) return;
    try {
      if (line.front() == '#') {
        const auto w = words(line.substr(1));
        if (w.size() == 4 && w[0] == "grid") {
          grid = Grid(parse_double(w[1]), parse_double(w[2]), static_cast<int>(parse_int(w[3])));
          values.reserve(grid->size());
        } else if (w.size() == 2 && w[0] == "dim") {
          dim = static_cast<int>(parse_int(w[1]));
        } else if (w.size() == 2 && w[0] == "phi" && phi != nullptr) {
          *phi = WeightFunction::parse(w[1]);
        }
        return;
      }
      if (line == "x,y,value") return;
      if (!grid || !dim) throw ParseError(source, no, "data row before grid/dim header");
      const auto cols = split(line, ',');
      if (cols.size() != 3) throw ParseError(source, no, "expected x,y,value");
      if (row_i >= grid->resolution) throw ParseError(source, no, "more rows than grid nodes");
      if (parse_double(cols[0]) != grid->node(row_i) || parse_double(cols[1]) != grid->node(row_j)) {
        throw ParseError(source, no, "node coordinates do not match the grid header");
      }
      values.push_back(parse_double(cols[2]));
      if (++row_j == grid->resolution) row_j = ++row_i;
    } catch (const InvalidArgument& e) {
      throw ParseError(source, no, e.what());
    }
  });
  if (!grid || !dim) throw ParseError(source, 1, "missing '# grid' or '# dim' header");
  if (values.size() != grid->size()) {
    throw ParseError(source, 0, "expected " + std::to_string(grid->size()) + " rows, got " +
                                    std::to_string(values.size()));
  }
  GridFunction f(*grid, *dim);
  f.values = std::move(values);
  return f;
}

GridFunction read_grid_function(const std::filesystem::path& path, WeightFunction* phi) {
  return parse_grid_function(read_file(path), path.string(), phi);
}

void write_grid_function(const std::filesystem::path& path, const GridFunction& f,
                         const WeightFunction& phi, std::string_view kind) {
  write_file_atomic(path, format_grid_function(f, phi, kind));
}

std::string format_matrix(const GridFunction& f) {
  const int m = f.grid.resolution;
  std::string out;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (i) out += ' ';
      out += i <= j ? format_double(f.at(i, j)) : "NaN";
    }
    out += '\n';
  }
  return out;
}

}  // namespace rankfield
