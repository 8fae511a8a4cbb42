#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rankfield/point_pattern.hpp"

namespace rankfield {

/// Engine used by every generator; seeded through `make_engine`.
using Engine = std::mt19937_64;

/// SplitMix64 finaliser; decorrelates consecutive seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;
Engine make_engine(std::uint64_t seed);

/// Seed of pattern `index` in stream `stream` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept;

/// Default cap on redraws for conditioned generators.
inline constexpr std::size_t kDefaultMaxAttempts = 1'000'000;

struct ProcessSpec {
  enum class Kind { Binomial, Poisson, Strauss, Matern, BaddeleySilverman };

  Kind kind = Kind::Binomial;
  std::optional<std::size_t> condition_n;  ///< exact point count; required for binomial/strauss
  Window window = Window::unit(2);

  double intensity = 100.0;        ///< poisson: rho
  double interaction_radius = 0.05;  ///< strauss: R
  double gamma = 0.5;              ///< strauss: interaction strength
  double parent_intensity = 10.0;  ///< matern: kappa
  double offspring_mean = 10.0;    ///< matern: m
  double cluster_radius = 0.02;    ///< matern: r_c
  std::size_t max_attempts = kDefaultMaxAttempts;

  static ProcessSpec binomial(std::size_t n, Window window = Window::unit(2));
  static ProcessSpec poisson(double rho, Window window = Window::unit(2));
  static ProcessSpec strauss(double radius, double gamma, std::size_t n);
  static ProcessSpec matern(double kappa, double offspring_mean, double radius,
                            std::optional<std::size_t> n);
  static ProcessSpec baddeley_silverman(std::optional<std::size_t> n);

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
  /// Short label used in tables, e.g. "Strauss".
  std::string label() const;
  static std::string kind_name(Kind kind);
  static Kind parse_kind(const std::string& name);
};

PointPattern generate(const ProcessSpec& spec, std::uint64_t seed);

PointPattern gen_binomial(std::size_t n, const Window& window, std::uint64_t seed);
PointPattern gen_poisson(double rho, const Window& window, std::uint64_t seed);

/// Fixed-n Strauss pattern in `window` by single-point Metropolis moves
/// targeting gamma^{s(x)}, after a burn-in of 200 n proposals.
PointPattern gen_strauss(double radius, double gamma, std::size_t n, std::uint64_t seed,
                         const Window& window = Window::unit(2));

/// Matérn cluster process on the unit square conditioned on exactly n points.
PointPattern gen_matern(double kappa, double offspring_mean, double radius, std::size_t n,
                        std::uint64_t seed, std::size_t max_attempts = kDefaultMaxAttempts);

/// Tile process on a 10 x 10 partition of the unit square: each tile holds
/// 0, 1 or 10 points with probabilities 1/10, 8/9, 1/90, conditioned on n.
PointPattern gen_baddeley_silverman(std::size_t n, std::uint64_t seed,
                                    std::size_t max_attempts = kDefaultMaxAttempts);

/// One unconditioned Matérn draw, keeping the parents for inspection.
struct MaternDraw {
  std::vector<double> parents;   ///< interleaved 2D coordinates
  std::vector<double> points;    ///< offspring inside the unit square
  std::vector<std::size_t> parent_of;  ///< parent index of each kept offspring
};
MaternDraw sample_matern(double kappa, double offspring_mean, double radius, Engine& rng);

/// One unconditioned tile draw: per-tile counts (row-major, 10 x 10) and points.
struct TileDraw {
  std::vector<int> counts;
  std::vector<double> points;
};
TileDraw sample_baddeley_silverman(Engine& rng);

/// Number of unordered pairs closer than `radius`.
std::size_t close_pairs(const PointPattern& pattern, double radius);

}  // namespace rankfield
