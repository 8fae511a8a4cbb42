#include "rankfield/simplex.hpp"

#include <algorithm>

#include "rankfield/errors.hpp"

namespace rankfield {

Simplex::Simplex(std::initializer_list<int> vertices)
    : Simplex(std::span<const int>(vertices.begin(), vertices.size())) {}

Simplex::Simplex(std::span<const int> vertices) {
  if (vertices.empty() || vertices.size() > kMaxVertices) {
    throw InvalidArgument("simplex must have between 1 and 4 vertices");
  }
  count_ = static_cast<int>(vertices.size());
  std::copy(vertices.begin(), vertices.end(), v_.begin());
  std::sort(v_.begin(), v_.begin() + count_);
  for (int i = 0; i < count_; ++i) {
    if (v_[i] < 0 || (i > 0 && v_[i] == v_[i - 1])) {
      throw InvalidArgument("simplex vertices must be distinct non-negative indices");
    }
  }
}

Simplex Simplex::facet(int slot) const noexcept {
  Simplex f;
  f.count_ = count_ - 1;
  for (int i = 0, j = 0; i < count_; ++i) {
    if (i != slot) f.v_[j++] = v_[i];
  }
  return f;
}

bool Simplex::contains(int vertex) const noexcept {
  return std::find(v_.begin(), v_.begin() + count_, vertex) != v_.begin() + count_;
}

std::string Simplex::to_string() const {
  std::string s = "[";
  for (int i = 0; i < count_; ++i) {
    if (i) s += ',';
    s += std::to_string(v_[i]);
  }
  return s + "]";
}

}  // namespace rankfield
