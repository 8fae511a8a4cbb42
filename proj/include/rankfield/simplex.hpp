#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace rankfield {

/// Sorted set of at most four point indices. Unused slots hold -1, so the
/// defaulted ordering is the lexicographic order of vertex tuples.
class Simplex {
 public:
  static constexpr int kMaxVertices = 4;

  Simplex() = default;
  Simplex(std::initializer_list<int> vertices);
  explicit Simplex(std::span<const int> vertices);

  int size() const noexcept { return count_; }
  int dim() const noexcept { return count_ - 1; }
  int operator[](int i) const noexcept { return v_[i]; }
  std::span<const int> vertices() const noexcept {
    return {v_.data(), static_cast<std::size_t>(count_)};
  }

  /// The facet obtained by dropping the vertex in slot `slot`.
  Simplex facet(int slot) const noexcept;
  bool contains(int vertex) const noexcept;

  std::string to_string() const;

  auto operator<=>(const Simplex&) const = default;
  bool operator==(const Simplex&) const = default;

 private:
  std::array<int, kMaxVertices> v_{-1, -1, -1, -1};
  int count_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (int v : s.vertices()) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace rankfield
