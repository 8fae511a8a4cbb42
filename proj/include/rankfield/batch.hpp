#pragma once

// Data-parallel kernels used by the Monte-Carlo loops and PCA. Every kernel
// exists twice: `serial::` is the reference implementation, `parallel::`
// distributes independent items over OpenMP threads. Results are written by
// item index and reduced in index order, so both variants return bitwise
// identical values for any thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rankfield/linalg.hpp"
#include "rankfield/persistence.hpp"
#include "rankfield/point_pattern.hpp"
#include "rankfield/rankspace.hpp"

namespace rankfield {

/// Produces pattern `index` of a batch; must be a pure function of the index.
using PatternSource = std::function<PointPattern(std::size_t index)>;

/// Rank functions of one pattern, one per requested homology dimension.
using RankSet = std::vector<RankFunction>;

/// The per-pattern pipeline: alpha filtration, persistence, discretisation.
PersistenceDiagram pattern_diagram(const PointPattern& pattern);
RankSet pattern_rank_functions(const PointPattern& pattern, std::span<const int> dims,
                               const Grid& grid);

namespace serial {

std::vector<PersistenceDiagram> diagrams(std::span<const PointPattern> patterns);
std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid);
std::vector<double> distances_squared(std::span<const RankFunction> functions,
                                      const RankFunction& centre, const Quadrature& quad);
Matrix gram_matrix(std::span<const GridFunction> functions, const Quadrature& quad);

}  // namespace serial

namespace parallel {

/// `jobs` <= 0 means the OpenMP default thread count.
std::vector<PersistenceDiagram> diagrams(std::span<const PointPattern> patterns, int jobs);
std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid, int jobs);
std::vector<double> distances_squared(std::span<const RankFunction> functions,
                                      const RankFunction& centre, const Quadrature& quad,
                                      int jobs);
Matrix gram_matrix(std::span<const GridFunction> functions, const Quadrature& quad, int jobs);

}  // namespace parallel

/// Dispatches to the serial kernel when jobs == 1, the parallel one otherwise.
std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid, int jobs);

}  // namespace rankfield
