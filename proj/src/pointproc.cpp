#include "rankfield/pointproc.hpp"

#include <cmath>
#include <numbers>

#include "rankfield/errors.hpp"

namespace rankfield {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Engine make_engine(std::uint64_t seed) { return Engine(mix_seed(seed)); }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept {
  return mix_seed(base ^ mix_seed(stream + 0x632be59bd9b4e019ULL)) + index;
}

ProcessSpec ProcessSpec::binomial(std::size_t n, Window window) {
  ProcessSpec s;
  s.kind = Kind::Binomial;
  s.condition_n = n;
  s.window = std::move(window);
  return s;
}

ProcessSpec ProcessSpec::poisson(double rho, Window window) {
  ProcessSpec s;
  s.kind = Kind::Poisson;
  s.intensity = rho;
  s.window = std::move(window);
  return s;
}

ProcessSpec ProcessSpec::strauss(double radius, double gamma, std::size_t n) {
  ProcessSpec s;
  s.kind = Kind::Strauss;
  s.interaction_radius = radius;
  s.gamma = gamma;
  s.condition_n = n;
  return s;
}

ProcessSpec ProcessSpec::matern(double kappa, double offspring_mean, double radius,
                                std::optional<std::size_t> n) {
  ProcessSpec s;
  s.kind = Kind::Matern;
  s.parent_intensity = kappa;
  s.offspring_mean = offspring_mean;
  s.cluster_radius = radius;
  s.condition_n = n;
  return s;
}

ProcessSpec ProcessSpec::baddeley_silverman(std::optional<std::size_t> n) {
  ProcessSpec s;
  s.kind = Kind::BaddeleySilverman;
  s.condition_n = n;
  return s;
}

std::string ProcessSpec::kind_name(Kind kind) {
  switch (kind) {
    case Kind::Binomial: return "binomial";
    case Kind::Poisson: return "poisson";
    case Kind::Strauss: return "strauss";
    case Kind::Matern: return "matern";
    case Kind::BaddeleySilverman: return "baddeley-silverman";
  }
  return "unknown";
}

ProcessSpec::Kind ProcessSpec::parse_kind(const std::string& name) {
  for (auto k : {Kind::Binomial, Kind::Poisson, Kind::Strauss, Kind::Matern,
                 Kind::BaddeleySilverman}) {
    if (kind_name(k) == name) return k;
  }
  if (name == "csr") return Kind::Binomial;
  throw InvalidArgument("unknown point process '" + name + "'");
}

std::string ProcessSpec::label() const {
  switch (kind) {
    case Kind::Binomial: return "CSR";
    case Kind::Poisson: return "Poisson";
    case Kind::Strauss: return "Strauss";
    case Kind::Matern: return "Matern Cluster";
    case Kind::BaddeleySilverman: return "Baddeley-Silverman";
  }
  return "unknown";
}

void ProcessSpec::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0; };
  if (window.dim() != 2 && window.dim() != 3) throw InvalidArgument("window must be 2D or 3D");
  if (condition_n && *condition_n == 0) throw InvalidArgument("conditioned count must be >= 1");
  switch (kind) {
    case Kind::Binomial:
      if (!condition_n) throw InvalidArgument("binomial process needs a point count n");
      break;
    case Kind::Poisson:
      if (!positive(intensity)) throw InvalidArgument("poisson intensity must be positive");
      break;
    case Kind::Strauss:
      if (!condition_n) throw InvalidArgument("strauss sampler needs a point count n");
      if (!positive(interaction_radius)) throw InvalidArgument("strauss R must be positive");
      if (!(gamma > 0 && gamma <= 1)) throw InvalidArgument("strauss gamma must lie in (0, 1]");
      break;
    case Kind::Matern:
      if (!positive(parent_intensity) || !positive(offspring_mean) || !positive(cluster_radius)) {
        throw InvalidArgument("matern parameters must be positive");
      }
      if (window != Window::unit(2)) throw InvalidArgument("matern is defined on the unit square");
      break;
    case Kind::BaddeleySilverman:
      if (window != Window::unit(2)) {
        throw InvalidArgument("baddeley-silverman is defined on the unit square");
      }
      break;
  }
}

namespace {

void uniform_point(Engine& rng, const Window& w, std::vector<double>& out) {
  for (int a = 0; a < w.dim(); ++a) {
    std::uniform_real_distribution<double> u(w.lower[a], w.upper[a]);
    out.push_back(u(rng));
  }
}

template <class Draw>
PointPattern conditioned(std::size_t n, std::size_t max_attempts, const char* what, Draw draw) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto coords = draw();
    if (coords.size() == 2 * n) return PointPattern(2, std::move(coords), Window::unit(2));
  }
  throw ConditioningTimeout(std::string(what) + ": no draw with exactly " + std::to_string(n) +
                            " points after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace

PointPattern gen_binomial(std::size_t n, const Window& window, std::uint64_t seed) {
  auto rng = make_engine(seed);
  std::vector<double> coords;
  coords.reserve(n * window.dim());
  for (std::size_t i = 0; i < n; ++i) uniform_point(rng, window, coords);
  return PointPattern(window.dim(), std::move(coords), window);
}

PointPattern gen_poisson(double rho, const Window& window, std::uint64_t seed) {
  if (!(rho > 0) || !std::isfinite(rho)) throw InvalidArgument("intensity must be positive");
  auto rng = make_engine(seed);
  std::poisson_distribution<std::size_t> count(rho * window.volume());
  const std::size_t n = count(rng);
  std::vector<double> coords;
  coords.reserve(n * window.dim());
  for (std::size_t i = 0; i < n; ++i) uniform_point(rng, window, coords);
  return PointPattern(window.dim(), std::move(coords), window);
}

PointPattern gen_strauss(double radius, double gamma, std::size_t n, std::uint64_t seed,
                         const Window& window) {
  if (!(radius > 0)) throw InvalidArgument("strauss R must be positive");
  if (!(gamma > 0 && gamma <= 1)) throw InvalidArgument("strauss gamma must lie in (0, 1]");
  if (n == 0) throw InvalidArgument("strauss needs n >= 1");
  const int d = window.dim();
  auto rng = make_engine(seed);
  std::vector<double> x;
  x.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) uniform_point(rng, window, x);

  const double r2 = radius * radius;
  const auto neighbours = [&](const double* p, std::size_t skip) {
    std::size_t s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == skip) continue;
      double dist = 0.0;
      for (int a = 0; a < d; ++a) dist += (p[a] - x[j * d + a]) * (p[a] - x[j * d + a]);
      s += dist < r2;
    }
    return s;
  };

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> proposal;
  const std::size_t proposals = 200 * n;
  for (std::size_t step = 0; step < proposals; ++step) {
    const std::size_t i = pick(rng);
    proposal.clear();
    uniform_point(rng, window, proposal);
    const double u = unit(rng);
    const auto before = static_cast<double>(neighbours(&x[i * d], i));
    const auto after = static_cast<double>(neighbours(proposal.data(), i));
    if (after <= before || u < std::pow(gamma, after - before)) {
      std::copy(proposal.begin(), proposal.end(), x.begin() + i * d);
    }
  }
  return PointPattern(d, std::move(x), window);
}

MaternDraw sample_matern(double kappa, double offspring_mean, double radius, Engine& rng) {
  MaternDraw out;
  const double lo = -radius, hi = 1.0 + radius;
  std::poisson_distribution<std::size_t> parents((hi - lo) * (hi - lo) * kappa);
  std::poisson_distribution<std::size_t> offspring(offspring_mean);
  std::uniform_real_distribution<double> coord(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t np = parents(rng);
  for (std::size_t p = 0; p < np; ++p) {
    const double px = coord(rng);
    const double py = coord(rng);
    out.parents.push_back(px);
    out.parents.push_back(py);
  }
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t k = offspring(rng);
    for (std::size_t c = 0; c < k; ++c) {
      const double r = radius * std::sqrt(unit(rng));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      const double x = out.parents[2 * p] + r * std::cos(theta);
      const double y = out.parents[2 * p + 1] + r * std::sin(theta);
      if (x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0) {
        out.points.push_back(x);
        out.points.push_back(y);
        out.parent_of.push_back(p);
      }
    }
  }
  return out;
}

PointPattern gen_matern(double kappa, double offspring_mean, double radius, std::size_t n,
                        std::uint64_t seed, std::size_t max_attempts) {
  if (!(kappa > 0 && offspring_mean > 0 && radius > 0)) {
    throw InvalidArgument("matern parameters must be positive");
  }
  auto rng = make_engine(seed);
  return conditioned(n, max_attempts, "matern", [&] {
    return sample_matern(kappa, offspring_mean, radius, rng).points;
  });
}

TileDraw sample_baddeley_silverman(Engine& rng) {
  // 1/10 + 8/9 + 1/90 = (9 + 80 + 1) / 90
  constexpr double kEmpty = 9.0 / 90.0;
  constexpr double kSingle = 89.0 / 90.0;
  TileDraw out;
  out.counts.resize(100);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& c : out.counts) {
    const double u = unit(rng);
    c = u < kEmpty ? 0 : (u < kSingle ? 1 : 10);
  }
  for (int t = 0; t < 100; ++t) {
    const double x0 = (t % 10) / 10.0, y0 = (t / 10) / 10.0;
    std::uniform_real_distribution<double> ux(x0, (t % 10 + 1) / 10.0);
    std::uniform_real_distribution<double> uy(y0, (t / 10 + 1) / 10.0);
    for (int c = 0; c < out.counts[t]; ++c) {
      out.points.push_back(ux(rng));
      out.points.push_back(uy(rng));
    }
  }
  return out;
}

PointPattern gen_baddeley_silverman(std::size_t n, std::uint64_t seed, std::size_t max_attempts) {
  auto rng = make_engine(seed);
  return conditioned(n, max_attempts, "baddeley-silverman",
                     [&] { return sample_baddeley_silverman(rng).points; });
}

PointPattern generate(const ProcessSpec& spec, std::uint64_t seed) {
  spec.validate();
  using Kind = ProcessSpec::Kind;
  switch (spec.kind) {
    case Kind::Binomial:
      return gen_binomial(*spec.condition_n, spec.window, seed);
    case Kind::Poisson: {
      if (!spec.condition_n) return gen_poisson(spec.intensity, spec.window, seed);
      for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
        auto p = gen_poisson(spec.intensity, spec.window, mix_seed(seed) + attempt);
        if (p.size() == *spec.condition_n) return p;
      }
      throw ConditioningTimeout("poisson: conditioning on n failed");
    }
    case Kind::Strauss:
      return gen_strauss(spec.interaction_radius, spec.gamma, *spec.condition_n, seed,
                         spec.window);
    case Kind::Matern:
      if (spec.condition_n) {
        return gen_matern(spec.parent_intensity, spec.offspring_mean, spec.cluster_radius,
                          *spec.condition_n, seed, spec.max_attempts);
      } else {
        auto rng = make_engine(seed);
        auto draw = sample_matern(spec.parent_intensity, spec.offspring_mean,
                                  spec.cluster_radius, rng);
        return PointPattern(2, std::move(draw.points), Window::unit(2));
      }
    case Kind::BaddeleySilverman:
      if (spec.condition_n) {
        return gen_baddeley_silverman(*spec.condition_n, seed, spec.max_attempts);
      } else {
        auto rng = make_engine(seed);
        return PointPattern(2, sample_baddeley_silverman(rng).points, Window::unit(2));
      }
  }
  throw InvalidArgument("unknown process kind");
}

std::size_t close_pairs(const PointPattern& pattern, double radius) {
  const double r2 = radius * radius;
  std::size_t s = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto p = pattern.point(i);
    for (std::size_t j = i + 1; j < pattern.size(); ++j) {
      const auto q = pattern.point(j);
      double d = 0.0;
      for (int a = 0; a < pattern.dim(); ++a) d += (p[a] - q[a]) * (p[a] - q[a]);
      s += d < r2;
    }
  }
  return s;
}

}  // namespace rankfield
