#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankfield/linalg.hpp"
#include "rankfield/rankspace.hpp"

namespace rankfield {

/// Functional PCA of rank functions under the weighted inner product.
struct PCAModel {
  WeightFunction phi;
  RankFunction mean;
  std::vector<GridFunction> components;  ///< unit-norm, mutually orthogonal
  std::vector<double> eigenvalues;       ///< of retained components, non-increasing
  Matrix scores;                         ///< n x r, scores(i, j) = <component j, f_i - mean>
  std::vector<double> explained_variance_ratio;  ///< per component, over total variance
  double total_variance = 0.0;                   ///< trace of the Gram matrix
  Matrix gram;                                   ///< n x n Gram matrix of centred functions

  std::size_t component_count() const noexcept { return components.size(); }

  /// Running sums of explained_variance_ratio.
  std::vector<double> cumulative_explained_variance() const;
};

/// Gram matrix <f_i - mean, f_j - mean> of centred functions.
Matrix centred_gram(std::span<const GridFunction> centred, const Quadrature& quad);

/// Fits up to `requested` components (at most n - 1). Eigenvalues below
/// 1e-12 times the largest are treated as rank deficiency and dropped.
/// Each component is sign-normalised so its largest-magnitude entry is
/// positive.
PCAModel fit_pca(std::span<const RankFunction> functions, const WeightFunction& phi,
                 std::size_t requested, int jobs = 1);

/// Scores of a new function: <component j, f - mean>.
std::vector<double> project(const PCAModel& model, const RankFunction& f);

}  // namespace rankfield
