#include "rankfield/fpca.hpp"

#include <algorithm>
#include <cmath>

#include "rankfield/batch.hpp"
#include "rankfield/errors.hpp"

namespace rankfield {

std::vector<double> PCAModel::cumulative_explained_variance() const {
  std::vector<double> out(explained_variance_ratio.size());
  double run = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = run += explained_variance_ratio[j];
  return out;
}

Matrix centred_gram(std::span<const GridFunction> centred, const Quadrature& quad) {
  return serial::gram_matrix(centred, quad);
}

PCAModel fit_pca(std::span<const RankFunction> functions, const WeightFunction& phi,
                 std::size_t requested, int jobs) {
  const std::size_t n = functions.size();
  if (n < 2) throw TooFewFunctions("functional PCA needs at least 2 functions, got " +
                                   std::to_string(n));
  if (requested > n - 1) {
    throw InvalidArgument("at most n - 1 = " + std::to_string(n - 1) +
                          " components can be requested");
  }
  PCAModel model;
  model.phi = phi;
  model.mean = mean(functions);
  const Quadrature quad(model.mean.grid, phi);

  std::vector<GridFunction> centred;
  centred.reserve(n);
  for (const auto& f : functions) centred.push_back(subtract(f, model.mean));

  model.gram = jobs > 1 ? parallel::gram_matrix(centred, quad, jobs)
                        : serial::gram_matrix(centred, quad);
  const auto eig = jacobi_eigen(model.gram);

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += model.gram(i, i);
  model.total_variance = trace;

  const double lead = eig.values.empty() ? 0.0 : eig.values.front();
  const std::size_t length = model.mean.values.size();
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < n && kept.size() < requested; ++k) {
    const double lambda = eig.values[k];
    if (!(lead > 0.0) || lambda < 1e-12 * lead || lambda <= 0.0) break;
    kept.push_back(k);
  }

  model.scores = Matrix(n, kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const std::size_t k = kept[r];
    // component = sum_i a_i (f_i - mean) / ||sum_i a_i (f_i - mean)||
    GridFunction zeta(model.mean.grid, model.mean.dim);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = eig.vectors(i, k);
      for (std::size_t l = 0; l < length; ++l) zeta.values[l] += a * centred[i].values[l];
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        norm2 += eig.vectors(i, k) * eig.vectors(m, k) * model.gram(i, m);
      }
    }
    const double norm = std::sqrt(norm2);
    std::size_t peak = 0;
    for (std::size_t l = 1; l < length; ++l) {
      if (std::fabs(zeta.values[l]) > std::fabs(zeta.values[peak])) peak = l;
    }
    const double sign = zeta.values[peak] < 0 ? -1.0 : 1.0;
    for (double& v : zeta.values) v *= sign / norm;

    for (std::size_t i = 0; i < n; ++i) {
      model.scores(i, r) = quad.inner_product(zeta.values, centred[i].values);
    }
    model.eigenvalues.push_back(eig.values[k]);
    model.explained_variance_ratio.push_back(trace > 0 ? eig.values[k] / trace : 0.0);
    model.components.push_back(std::move(zeta));
  }
  return model;
}

std::vector<double> project(const PCAModel& model, const RankFunction& f) {
  const auto centred = subtract(f, model.mean);
  const Quadrature quad(model.mean.grid, model.phi);
  std::vector<double> out;
  out.reserve(model.components.size());
  for (const auto& zeta : model.components) {
    out.push_back(quad.inner_product(zeta.values, centred.values));
  }
  return out;
}

}  // namespace rankfield
