#include "rankfield/csr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rankfield/batch.hpp"
#include "rankfield/errors.hpp"

namespace rankfield {

namespace {
constexpr std::uint64_t kMeanStream = 1;
constexpr std::uint64_t kNullStream = 2;
constexpr std::uint64_t kPowerStream = 100;
}  // namespace

double higher_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyInput("quantile of an empty sample");
  if (!(q >= 0 && q <= 1)) throw InvalidArgument("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto idx = static_cast<std::size_t>(std::ceil(pos));
  return sorted[std::min(idx, sorted.size() - 1)];
}

CSRModel csr_model_from_samples(std::span<const RankFunction> fitting,
                                std::span<const RankFunction> held_out, const WeightFunction& phi,
                                double p_level, int jobs) {
  if (fitting.size() < 2 || held_out.size() < 2) {
    throw TooFewFunctions("CSR fit needs at least 2 fitting and 2 held-out patterns");
  }
  if (!(p_level > 0 && p_level < 1)) throw InvalidArgument("p level must lie in (0, 1)");
  CSRModel model;
  model.dim = fitting.front().dim;
  model.phi = phi;
  model.p_level = p_level;
  model.n_mean = fitting.size();
  model.mean = mean(fitting);
  const Quadrature quad(model.mean.grid, phi);
  model.null_distances = jobs == 1 ? serial::distances_squared(held_out, model.mean, quad)
                                   : parallel::distances_squared(held_out, model.mean, quad, jobs);
  std::sort(model.null_distances.begin(), model.null_distances.end());
  model.cutoff = higher_quantile(model.null_distances, 1.0 - p_level);
  return model;
}

std::vector<CSRModel> fit_csr_models(const CsrFitConfig& config, std::span<const int> dims) {
  if (config.n_mean < 2 || config.n_null < 2) {
    throw TooFewFunctions("n_mean and n_null must both be at least 2");
  }
  const auto source = [&](std::uint64_t stream) {
    return [&config, stream](std::size_t i) {
      return gen_binomial(config.n_points, config.window, derive_seed(config.seed, stream, i));
    };
  };
  const auto fitting = rank_functions(source(kMeanStream), config.n_mean, dims, config.grid,
                                      config.jobs);
  const auto held_out = rank_functions(source(kNullStream), config.n_null, dims, config.grid,
                                       config.jobs);
  std::vector<CSRModel> models;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    std::vector<RankFunction> fit_d, null_d;
    fit_d.reserve(fitting.size());
    null_d.reserve(held_out.size());
    for (const auto& s : fitting) fit_d.push_back(s[d]);
    for (const auto& s : held_out) null_d.push_back(s[d]);
    auto m = csr_model_from_samples(fit_d, null_d, config.phi, config.p_level, config.jobs);
    m.n_points = config.n_points;
    m.seed = config.seed;
    models.push_back(std::move(m));
  }
  return models;
}

CSRModel fit_csr(const CsrFitConfig& config, int dim) {
  const int dims[] = {dim};
  return fit_csr_models(config, dims).front();
}

TestResult test_rank_function(const CSRModel& model, const RankFunction& f) {
  require_same_grid(model.mean, f);
  TestResult r;
  r.distance_squared = distance_squared(f, model.mean, model.phi);
  r.reject = r.distance_squared > model.cutoff;
  return r;
}

TestResult test_pattern(const CSRModel& model, const PointPattern& pattern) {
  const auto diagram = pattern_diagram(pattern);
  return test_rank_function(model, rank_from_diagram(diagram, model.dim, model.grid()));
}

PowerTable power_study(std::span<const ProcessSpec> specs, std::size_t n_test,
                       std::span<const CSRModel> models, std::uint64_t seed, int jobs) {
  PowerTable table;
  table.n_test = n_test;
  for (const auto& m : models) table.dims.push_back(m.dim);
  table.rejections.assign(models.size(), std::vector<std::size_t>(specs.size(), 0));
  for (const auto& s : specs) table.columns.push_back(s.label());
  if (models.empty()) return table;
  for (const auto& m : models) {
    if (!(m.grid() == models.front().grid())) {
      throw GridMismatch("power study models must share one grid");
    }
  }

  std::vector<int> dims(table.dims.begin(), table.dims.end());
  for (std::size_t c = 0; c < specs.size(); ++c) {
    specs[c].validate();
    const auto& spec = specs[c];
    const PatternSource source = [&spec, seed, c](std::size_t i) {
      return generate(spec, derive_seed(seed, kPowerStream + c, i));
    };
    const auto sets = rank_functions(source, n_test, dims, models.front().grid(), jobs);
    for (const auto& set : sets) {
      for (std::size_t r = 0; r < models.size(); ++r) {
        if (test_rank_function(models[r], set[r]).reject) ++table.rejections[r][c];
      }
    }
  }
  return table;
}

std::string PowerTable::to_csv() const {
  std::string out = "test";
  for (const auto& c : columns) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < dims.size(); ++r) {
    out += "dim " + std::to_string(dims[r]);
    for (auto v : rejections[r]) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

std::string PowerTable::to_text() const {
  std::vector<std::size_t> width;
  std::size_t first = 4;
  for (std::size_t r = 0; r < dims.size(); ++r) {
    first = std::max(first, ("dim " + std::to_string(dims[r])).size());
  }
  for (const auto& c : columns) width.push_back(std::max<std::size_t>(c.size(), 3));
  std::ostringstream ss;
  const auto pad = [&](const std::string& s, std::size_t w) {
    ss << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  pad("", first);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    ss << " | ";
    pad(columns[c], width[c]);
  }
  ss << "\n" << std::string(first, '-');
  for (auto w : width) ss << "-+-" << std::string(w, '-');
  ss << "\n";
  for (std::size_t r = 0; r < dims.size(); ++r) {
    pad("dim " + std::to_string(dims[r]), first);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      ss << " | ";
      pad(std::to_string(rejections[r][c]), width[c]);
    }
    ss << "\n";
  }
  ss << "(rejections out of " << n_test << " patterns per model)\n";
  return ss.str();
}

}  // namespace rankfield
