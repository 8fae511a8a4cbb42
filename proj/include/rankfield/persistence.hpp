#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rankfield/geometry.hpp"

namespace rankfield {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct DiagramPoint {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;  ///< +inf for essential classes

  bool essential() const noexcept { return death == kInfinity; }
  bool operator==(const DiagramPoint&) const = default;
};

/// Multiset of (dim, birth, death) points. Zero-persistence pairs are never
/// stored; essential classes carry death = +inf.
struct PersistenceDiagram {
  std::vector<DiagramPoint> points;

  std::size_t essential_count(int dim) const;
  std::vector<DiagramPoint> in_dim(int dim) const;
  int max_dim() const;

  /// Points sorted by (dim, birth, death); the canonical order used for output.
  void sort();
};

/// Z/2 persistent homology of a filtered complex by boundary-matrix column
/// reduction with clearing. Simplices are ordered by (value, dimension,
/// vertex tuple).
PersistenceDiagram compute_persistence(const FilteredComplex& complex);

}  // namespace rankfield
