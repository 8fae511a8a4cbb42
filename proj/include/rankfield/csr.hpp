#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankfield/pointproc.hpp"
#include "rankfield/rankspace.hpp"

namespace rankfield {

/// Null model of the rank-function CSR test for one homology dimension.
struct CSRModel {
  int dim = 0;
  WeightFunction phi;
  RankFunction mean;                  ///< mean rank function of the CSR fitting set
  std::vector<double> null_distances;  ///< sorted squared distances of held-out CSR patterns
  double cutoff = 0.0;                 ///< reject when squared distance exceeds this
  double p_level = 0.05;
  std::size_t n_mean = 0;
  std::size_t n_points = 0;
  std::uint64_t seed = 0;

  const Grid& grid() const noexcept { return mean.grid; }
};

struct CsrFitConfig {
  std::size_t n_mean = 300;
  std::size_t n_null = 200;
  std::size_t n_points = 100;
  Grid grid{0.0, 0.5, 100};
  WeightFunction phi = WeightFunction::indicator();
  double p_level = 0.05;
  std::uint64_t seed = 0;
  Window window = Window::unit(2);
  int jobs = 1;
};

/// Empirical quantile with "higher" interpolation: sorted[ceil(q (n - 1))].
double higher_quantile(std::span<const double> sorted, double q);

/// Builds a model from already computed rank functions.
CSRModel csr_model_from_samples(std::span<const RankFunction> fitting,
                                std::span<const RankFunction> held_out, const WeightFunction& phi,
                                double p_level, int jobs = 1);

/// Fits one model per requested dimension from the same binomial patterns:
/// n_mean patterns for the mean, n_null independent ones for the cutoff.
std::vector<CSRModel> fit_csr_models(const CsrFitConfig& config, std::span<const int> dims);
CSRModel fit_csr(const CsrFitConfig& config, int dim);

struct TestResult {
  double distance_squared = 0.0;
  bool reject = false;
};

TestResult test_rank_function(const CSRModel& model, const RankFunction& f);
TestResult test_pattern(const CSRModel& model, const PointPattern& pattern);

/// Rejection counts: one row per model (homology dimension), one column per
/// point process.
struct PowerTable {
  std::vector<std::string> columns;
  std::vector<int> dims;
  std::vector<std::vector<std::size_t>> rejections;  ///< [row][column]
  std::size_t n_test = 0;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Generates n_test patterns per spec (seeds from `seed` and the spec index)
/// and tests each against every model.
PowerTable power_study(std::span<const ProcessSpec> specs, std::size_t n_test,
                       std::span<const CSRModel> models, std::uint64_t seed, int jobs = 1);

}  // namespace rankfield
