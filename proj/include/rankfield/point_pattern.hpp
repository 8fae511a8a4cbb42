#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rankfield {

/// Axis-aligned box, closed on every side.
struct Window {
  std::vector<double> lower;
  std::vector<double> upper;

  static Window unit(int dim);
  static Window bounding_box(int dim, std::span<const double> coords);

  int dim() const noexcept { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(std::span<const double> p) const;

  bool operator==(const Window&) const = default;
};

/// Finite set of points in R^2 or R^3 inside a window. Coordinates are
/// stored interleaved (x0 y0 [z0] x1 y1 ...).
class PointPattern {
 public:
  PointPattern() = default;
  PointPattern(int dim, std::vector<double> coords, Window window);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const Window& window() const noexcept { return window_; }

  /// Same points scaled by `factor` about the origin, window scaled too.
  PointPattern scaled(double factor) const;

  bool operator==(const PointPattern&) const = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  Window window_;
};

}  // namespace rankfield
