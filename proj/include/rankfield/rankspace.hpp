#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rankfield/persistence.hpp"

namespace rankfield {

/// Square lattice over [lower, upper]^2 restricted to x <= y. Node (i, j),
/// i <= j, sits at (node(i), node(j)); storage is row-major in i.
struct Grid {
  double lower = 0.0;
  double upper = 0.5;
  int resolution = 100;

  Grid() = default;
  Grid(double lower, double upper, int resolution);

  /// Parses "a0,a1,M".
  static Grid parse(const std::string& text);
  std::string to_string() const;

  double step() const noexcept { return (upper - lower) / (resolution - 1); }
  double node(int i) const noexcept {
    return i == resolution - 1 ? upper : lower + i * step();
  }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(resolution) * (resolution + 1) / 2;
  }
  std::size_t index(int i, int j) const noexcept {
    // rows 0..i-1 hold M, M-1, ..., M-i+1 nodes
    const auto ii = static_cast<std::size_t>(i);
    return ii * resolution - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i);
  }

  bool operator==(const Grid&) const = default;
};

/// Weight on persistence (y - x). Either the indicator of [0, width] (width
/// defaults to the grid span) or exp(-rate * t).
struct WeightFunction {
  enum class Kind { Indicator, Exponential };

  Kind kind = Kind::Indicator;
  double parameter = 0.0;  ///< width for Indicator (0 = grid span), rate for Exponential

  static WeightFunction indicator(double width = 0.0);
  static WeightFunction exponential(double rate);

  /// Parses "indicator", "indicator:<width>" or "exp:<rate>".
  static WeightFunction parse(const std::string& text);
  std::string to_string() const;

  double operator()(double t, const Grid& grid) const;

  bool operator==(const WeightFunction&) const = default;
};

/// Real-valued function sampled on a grid, tagged with a homology dimension.
/// Rank functions are the non-negative members of this space; centred
/// functions and principal components use the same type.
struct GridFunction {
  Grid grid;
  int dim = 0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(const Grid& g, int k) : grid(g), dim(k), values(g.size(), 0.0) {}

  double at(int i, int j) const { return values[grid.index(i, j)]; }
  bool operator==(const GridFunction&) const = default;
};

using RankFunction = GridFunction;

/// Quadrature weights for one grid and weight function: each node carries
/// the area of its grid cell clipped to the window and to {x <= y}, times
/// phi(y - x).
class Quadrature {
 public:
  Quadrature(const Grid& grid, const WeightFunction& phi);

  const Grid& grid() const noexcept { return grid_; }
  const WeightFunction& phi() const noexcept { return phi_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double inner_product(std::span<const double> u, std::span<const double> v) const;
  double distance_squared(std::span<const double> f, std::span<const double> h) const;

 private:
  Grid grid_;
  WeightFunction phi_;
  std::vector<double> weights_;
};

/// beta_k at every node: diagram points of dimension k with birth <= x and
/// death > y. Essential classes count wherever birth <= x.
RankFunction rank_from_diagram(const PersistenceDiagram& diagram, int k, const Grid& grid);

double inner_product(const GridFunction& u, const GridFunction& v, const WeightFunction& phi);
double distance_squared(const GridFunction& f, const GridFunction& h, const WeightFunction& phi);
double distance(const GridFunction& f, const GridFunction& h, const WeightFunction& phi);

/// Pointwise mean. Throws EmptyInput or GridMismatch.
RankFunction mean(std::span<const RankFunction> functions);

GridFunction subtract(const GridFunction& a, const GridFunction& b);

/// Smallest value of beta(c,b) - beta(a,b) - beta(c,d) + beta(a,d) over all
/// grid rectangles a <= c <= b <= d (computed from unit cells, which sum to
/// every larger rectangle). Non-negative for rank functions and their means.
double min_inclusion_exclusion(const GridFunction& f);
bool is_monotone(const GridFunction& f, double tolerance = 1e-9);

void require_same_grid(const GridFunction& a, const GridFunction& b);

}  // namespace rankfield
