#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankfield/point_pattern.hpp"
#include "rankfield/simplex.hpp"

namespace rankfield {

/// Simplex with its filtration radius.
struct FilteredSimplex {
  Simplex simplex;
  double value = 0.0;
};

/// Simplices with filtration radii. Closed under taking faces, and every
/// face has a value no larger than its cofaces.
struct FilteredComplex {
  int ambient_dim = 0;
  std::vector<FilteredSimplex> simplices;

  std::size_t size() const noexcept { return simplices.size(); }
  std::size_t vertex_count() const;
  int max_dim() const;
};

/// Sphere through the given points with its centre in their affine hull.
struct Sphere {
  std::vector<double> center;
  double radius_squared = 0.0;
  double radius() const;
};

/// Smallest circumsphere of 1..4 affinely independent points given as
/// `dim`-vectors. Returns false when the points are affinely dependent.
bool circumsphere(std::span<const double* const> points, int dim, Sphere& out);

/// Radius of the minimum enclosing ball, by exhaustive search over support
/// sets. Intended for small point sets (up to a few dozen points).
double min_enclosing_ball_radius(const PointPattern& pattern, std::span<const int> subset);

/// Delaunay triangulation of a 2D or 3D pattern by incremental insertion in
/// index order. Points exactly on a circumsphere never trigger a flip, so
/// cocircular and cospherical configurations resolve deterministically.
/// Returns the top-dimensional cells in lexicographic order.
std::vector<Simplex> delaunay(const PointPattern& pattern);

/// Alpha filtration on the Delaunay complex, with radii (not squared radii)
/// as filtration values.
FilteredComplex alpha_filtration(const PointPattern& pattern);

/// Alpha filtration built from an already computed Delaunay triangulation.
FilteredComplex alpha_filtration(const PointPattern& pattern, std::span<const Simplex> cells);

/// Full Čech filtration up to `max_dim`, each simplex valued at the radius of
/// the minimum enclosing ball of its vertices. Brute force; refuses patterns
/// larger than `max_points`.
FilteredComplex cech_oracle(const PointPattern& pattern, int max_dim, std::size_t max_points = 10);

/// True when every face of every simplex is present and values are monotone.
bool is_valid_filtration(const FilteredComplex& complex);

}  // namespace rankfield
