#include "rankfield/batch.hpp"

#include <omp.h>

#include <exception>

#include "rankfield/errors.hpp"
#include "rankfield/geometry.hpp"

namespace rankfield {

PersistenceDiagram pattern_diagram(const PointPattern& pattern) {
  return compute_persistence(alpha_filtration(pattern));
}

RankSet pattern_rank_functions(const PointPattern& pattern, std::span<const int> dims,
                               const Grid& grid) {
  const auto diagram = pattern_diagram(pattern);
  RankSet out;
  out.reserve(dims.size());
  for (int k : dims) out.push_back(rank_from_diagram(diagram, k, grid));
  return out;
}

namespace {

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

// Runs body(i) for i in [0, count) on `jobs` threads. The first failure by
// index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(jobs))
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double gram_entry(const GridFunction& a, const GridFunction& b, const Quadrature& quad) {
  return quad.inner_product(a.values, b.values);
}

void check_lengths(std::span<const GridFunction> functions, const Quadrature& quad) {
  for (const auto& f : functions) {
    if (!(f.grid == quad.grid()) || f.values.size() != quad.weights().size()) {
      throw GridMismatch("function grid does not match the quadrature grid");
    }
  }
}

}  // namespace

namespace serial {

std::vector<PersistenceDiagram> diagrams(std::span<const PointPattern> patterns) {
  std::vector<PersistenceDiagram> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(pattern_diagram(p));
  return out;
}

std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid) {
  std::vector<RankSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(pattern_rank_functions(source(i), dims, grid));
  }
  return out;
}

std::vector<double> distances_squared(std::span<const RankFunction> functions,
                                      const RankFunction& centre, const Quadrature& quad) {
  std::vector<double> out;
  out.reserve(functions.size());
  for (const auto& f : functions) {
    require_same_grid(f, centre);
    out.push_back(quad.distance_squared(f.values, centre.values));
  }
  return out;
}

Matrix gram_matrix(std::span<const GridFunction> functions, const Quadrature& quad) {
  check_lengths(functions, quad);
  const std::size_t n = functions.size();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = g(j, i) = gram_entry(functions[i], functions[j], quad);
    }
  }
  return g;
}

}  // namespace serial

namespace parallel {

std::vector<PersistenceDiagram> diagrams(std::span<const PointPattern> patterns, int jobs) {
  std::vector<PersistenceDiagram> out(patterns.size());
  parallel_for(patterns.size(), jobs, [&](std::size_t i) { out[i] = pattern_diagram(patterns[i]); });
  return out;
}

std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid, int jobs) {
  std::vector<RankSet> out(count);
  parallel_for(count, jobs,
               [&](std::size_t i) { out[i] = pattern_rank_functions(source(i), dims, grid); });
  return out;
}

std::vector<double> distances_squared(std::span<const RankFunction> functions,
                                      const RankFunction& centre, const Quadrature& quad,
                                      int jobs) {
  std::vector<double> out(functions.size());
  parallel_for(functions.size(), jobs, [&](std::size_t i) {
    require_same_grid(functions[i], centre);
    out[i] = quad.distance_squared(functions[i].values, centre.values);
  });
  return out;
}

Matrix gram_matrix(std::span<const GridFunction> functions, const Quadrature& quad, int jobs) {
  check_lengths(functions, quad);
  const std::size_t n = functions.size();
  Matrix g(n, n);
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) g(i, j) = gram_entry(functions[i], functions[j], quad);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

}  // namespace parallel

std::vector<RankSet> rank_functions(const PatternSource& source, std::size_t count,
                                    std::span<const int> dims, const Grid& grid, int jobs) {
  if (jobs == 1) return serial::rank_functions(source, count, dims, grid);
  return parallel::rank_functions(source, count, dims, grid, jobs);
}

}  // namespace rankfield
