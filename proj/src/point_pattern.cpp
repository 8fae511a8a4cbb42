#include "rankfield/point_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rankfield/errors.hpp"

namespace rankfield {

Window Window::unit(int dim) {
  return Window{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Window Window::bounding_box(int dim, std::span<const double> coords) {
  Window w{std::vector<double>(dim, std::numeric_limits<double>::infinity()),
           std::vector<double>(dim, -std::numeric_limits<double>::infinity())};
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto a = i % dim;
    w.lower[a] = std::min(w.lower[a], coords[i]);
    w.upper[a] = std::max(w.upper[a], coords[i]);
  }
  if (coords.empty()) return unit(dim);
  return w;
}

double Window::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= upper[a] - lower[a];
  return v;
}

bool Window::contains(std::span<const double> p) const {
  for (int a = 0; a < dim(); ++a) {
    if (p[a] < lower[a] || p[a] > upper[a]) return false;
  }
  return true;
}

PointPattern::PointPattern(int dim, std::vector<double> coords, Window window)
    : dim_(dim), coords_(std::move(coords)), window_(std::move(window)) {
  if (dim_ != 2 && dim_ != 3) {
    throw InvalidArgument("point dimension must be 2 or 3, got " + std::to_string(dim_));
  }
  if (coords_.size() % dim_ != 0) {
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
  }
  if (window_.dim() != dim_ || window_.upper.size() != window_.lower.size()) {
    throw InvalidArgument("window dimension does not match point dimension");
  }
  for (int a = 0; a < dim_; ++a) {
    if (!(window_.lower[a] <= window_.upper[a])) {
      throw InvalidArgument("window has lower > upper on axis " + std::to_string(a));
    }
  }
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = point(i);
    for (double c : p) {
      if (!std::isfinite(c)) {
        throw InvalidArgument("point " + std::to_string(i) + " has a non-finite coordinate");
      }
    }
    if (!window_.contains(p)) {
      throw InvalidArgument("point " + std::to_string(i) + " lies outside the window");
    }
  }
}

PointPattern PointPattern::scaled(double factor) const {
  auto c = coords_;
  for (double& x : c) x *= factor;
  Window w = window_;
  for (int a = 0; a < dim_; ++a) {
    w.lower[a] *= factor;
    w.upper[a] *= factor;
    if (factor < 0) std::swap(w.lower[a], w.upper[a]);
  }
  return PointPattern(dim_, std::move(c), std::move(w));
}

}  // namespace rankfield
