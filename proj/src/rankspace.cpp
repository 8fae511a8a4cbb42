#include "rankfield/rankspace.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>

#include "rankfield/errors.hpp"
#include "rankfield/io.hpp"

namespace rankfield {

Grid::Grid(double lo, double hi, int m) : lower(lo), upper(hi), resolution(m) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(0.0 <= lo && lo < hi)) {
    throw InvalidArgument("grid bounds must satisfy 0 <= a0 < a1");
  }
  if (m < 2) throw InvalidArgument("grid resolution must be at least 2");
}

Grid Grid::parse(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InvalidArgument("grid must be given as a0,a1,M: '" + text + "'");
  return Grid(parse_double(parts[0]), parse_double(parts[1]),
              static_cast<int>(parse_int(parts[2])));
}

std::string Grid::to_string() const {
  return format_double(lower) + "," + format_double(upper) + "," + std::to_string(resolution);
}

WeightFunction WeightFunction::indicator(double width) {
  if (width < 0) throw InvalidArgument("indicator width must be non-negative");
  return {Kind::Indicator, width};
}

WeightFunction WeightFunction::exponential(double rate) {
  if (!(rate > 0) || !std::isfinite(rate)) {
    throw InvalidArgument("exponential weight rate must be positive");
  }
  return {Kind::Exponential, rate};
}

WeightFunction WeightFunction::parse(const std::string& text) {
  if (text == "indicator") return indicator();
  if (text.rfind("indicator:", 0) == 0) return indicator(parse_double(text.substr(10)));
  if (text.rfind("exp:", 0) == 0) return exponential(parse_double(text.substr(4)));
  throw InvalidArgument("unknown weight function '" + text + "' (indicator | exp:<rate>)");
}

std::string WeightFunction::to_string() const {
  if (kind == Kind::Exponential) return "exp:" + format_double(parameter);
  return parameter == 0.0 ? "indicator" : "indicator:" + format_double(parameter);
}

double WeightFunction::operator()(double t, const Grid& grid) const {
  if (t < 0) return 0.0;
  if (kind == Kind::Exponential) return std::exp(-parameter * t);
  const double width = parameter == 0.0 ? grid.upper - grid.lower : parameter;
  return t <= width ? 1.0 : 0.0;
}

Quadrature::Quadrature(const Grid& grid, const WeightFunction& phi)
    : grid_(grid), phi_(phi), weights_(grid.size()) {
  const int m = grid.resolution;
  const double h = grid.step();
  // Fraction of a full cell that survives clipping to the window per axis.
  const auto edge = [m](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double area = i == j ? 0.5 * h * h * edge(i) * edge(i) : h * h * edge(i) * edge(j);
      weights_[grid.index(i, j)] = area * phi(grid.node(j) - grid.node(i), grid);
    }
  }
}

double Quadrature::inner_product(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != weights_.size() || v.size() != weights_.size()) {
    throw GridMismatch("function length does not match the quadrature grid");
  }
  double s = 0.0;
  for (std::size_t l = 0; l < weights_.size(); ++l) s += weights_[l] * u[l] * v[l];
  return s;
}

double Quadrature::distance_squared(std::span<const double> f, std::span<const double> h) const {
  if (f.size() != weights_.size() || h.size() != weights_.size()) {
    throw GridMismatch("function length does not match the quadrature grid");
  }
  double s = 0.0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double d = f[l] - h[l];
    s += weights_[l] * d * d;
  }
  return s;
}

RankFunction rank_from_diagram(const PersistenceDiagram& diagram, int k, const Grid& grid) {
  const int m = grid.resolution;
  // hist[b][e]: points whose first counted column is b and whose first
  // uncounted row is e (node j counts iff j < e).
  std::vector<double> hist(static_cast<std::size_t>(m) * (m + 1), 0.0);
  for (const auto& p : diagram.points) {
    if (p.dim != k) continue;
    int b = 0;
    while (b < m && !(p.birth <= grid.node(b))) ++b;
    if (b == m) continue;
    int e = 0;
    while (e < m && p.death > grid.node(e)) ++e;
    if (e <= b) continue;  // dead before the diagonal node at b
    hist[static_cast<std::size_t>(b) * (m + 1) + e] += 1.0;
  }
  // value(i, j) = #{b <= i, e > j}
  std::vector<double> above(static_cast<std::size_t>(m) * (m + 1), 0.0);
  for (int b = 0; b < m; ++b) {
    double run = 0.0;
    for (int e = m; e >= 0; --e) {
      run += hist[static_cast<std::size_t>(b) * (m + 1) + e];
      above[static_cast<std::size_t>(b) * (m + 1) + e] = run;  // count with e' >= e
    }
  }
  RankFunction f(grid, k);
  std::vector<double> acc(m + 1, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int e = 0; e <= m; ++e) acc[e] += above[static_cast<std::size_t>(i) * (m + 1) + e];
    for (int j = i; j < m; ++j) f.values[grid.index(i, j)] = acc[j + 1];
  }
  return f;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) {
    throw GridMismatch("grids differ: " + a.grid.to_string() + " vs " + b.grid.to_string());
  }
  if (a.dim != b.dim) {
    throw GridMismatch("homology dimensions differ: " + std::to_string(a.dim) + " vs " +
                       std::to_string(b.dim));
  }
  if (a.values.size() != a.grid.size() || b.values.size() != b.grid.size()) {
    throw GridMismatch("function length does not match its grid");
  }
}

double inner_product(const GridFunction& u, const GridFunction& v, const WeightFunction& phi) {
  require_same_grid(u, v);
  return Quadrature(u.grid, phi).inner_product(u.values, v.values);
}

double distance_squared(const GridFunction& f, const GridFunction& h, const WeightFunction& phi) {
  require_same_grid(f, h);
  return Quadrature(f.grid, phi).distance_squared(f.values, h.values);
}

double distance(const GridFunction& f, const GridFunction& h, const WeightFunction& phi) {
  return std::sqrt(distance_squared(f, h, phi));
}

RankFunction mean(std::span<const RankFunction> functions) {
  if (functions.empty()) throw EmptyInput("mean of an empty list of rank functions");
  RankFunction out(functions.front().grid, functions.front().dim);
  for (const auto& f : functions) {
    require_same_grid(functions.front(), f);
    for (std::size_t l = 0; l < out.values.size(); ++l) out.values[l] += f.values[l];
  }
  const double n = static_cast<double>(functions.size());
  for (double& v : out.values) v /= n;
  return out;
}

GridFunction subtract(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction out = a;
  for (std::size_t l = 0; l < out.values.size(); ++l) out.values[l] -= b.values[l];
  return out;
}

double min_inclusion_exclusion(const GridFunction& f) {
  const int m = f.grid.resolution;
  double worst = 0.0;
  // Unit rectangle a = x_i, c = x_{i+1}, b = y_j, d = y_{j+1}, needs c <= b.
  for (int i = 0; i + 1 < m; ++i) {
    for (int j = i + 1; j + 1 < m; ++j) {
      const double v = f.at(i + 1, j) - f.at(i, j) - f.at(i + 1, j + 1) + f.at(i, j + 1);
      worst = std::min(worst, v);
    }
  }
  return worst;
}

bool is_monotone(const GridFunction& f, double tolerance) {
  return min_inclusion_exclusion(f) >= -tolerance;
}

}  // namespace rankfield
