#pragma once

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "rankfield/geometry.hpp"
#include "rankfield/persistence.hpp"
#include "rankfield/point_pattern.hpp"

namespace rankfield::testing {

inline PointPattern pattern2(std::vector<double> coords) {
  return PointPattern(2, coords, Window::bounding_box(2, coords));
}

inline PointPattern pattern3(std::vector<double> coords) {
  return PointPattern(3, coords, Window::bounding_box(3, coords));
}

inline PointPattern equilateral_triangle() {
  return pattern2({0, 0, 2, 0, 1, std::sqrt(3.0)});
}

inline PointPattern regular_tetrahedron() {
  // Alternate cube corners of a cube with edge sqrt(2) give edge length 2.
  const double a = std::sqrt(2.0) / 2;
  return pattern3({a, a, a, a, -a, -a, -a, a, -a, -a, -a, a});
}

inline PointPattern regular_octahedron() {
  const double a = std::sqrt(2.0);
  return pattern3({a, 0, 0, -a, 0, 0, 0, a, 0, 0, -a, 0, 0, 0, a, 0, 0, -a});
}

inline PointPattern random_pattern(int dim, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(n * dim);
  for (auto& v : c) v = u(rng);
  return PointPattern(dim, c, Window::unit(dim));
}

inline PersistenceDiagram diagram_of(const PointPattern& p) {
  return compute_persistence(alpha_filtration(p));
}

/// True when two diagrams agree as multisets within tol (greedy matching,
/// which is exact for tol below half the gap between distinct points).
inline bool same_diagram(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
  if (a.points.size() != b.points.size()) return false;
  std::vector<bool> used(b.points.size(), false);
  for (const auto& p : a.points) {
    bool found = false;
    for (std::size_t j = 0; j < b.points.size() && !found; ++j) {
      const auto& q = b.points[j];
      if (used[j] || p.dim != q.dim || std::fabs(p.birth - q.birth) > tol) continue;
      if (p.essential() != q.essential()) continue;
      if (!p.essential() && std::fabs(p.death - q.death) > tol) continue;
      used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

/// Rank of H_k(K_a) -> H_k(K_b) by Gaussian elimination over Z2 on dense
/// bit rows, computed as dim(Z_k(K_a) + B_k(K_b)) - dim B_k(K_b).
class Z2RankOracle {
 public:
  explicit Z2RankOracle(const FilteredComplex& c) : complex_(c) {
    for (std::size_t i = 0; i < c.simplices.size(); ++i) index_[c.simplices[i].simplex] = i;
  }

  int rank(int k, double a, double b) const {
    const auto za = cycles(k, a);
    const auto bb = boundaries(k, b);
    auto both = za;
    both.insert(both.end(), bb.begin(), bb.end());
    return row_rank(both) - row_rank(bb);
  }

  int betti(int k, double a) const { return rank(k, a, a); }

 private:
  using Row = std::vector<bool>;

  std::size_t width() const { return complex_.simplices.size(); }

  static int row_rank(std::vector<Row> rows) {
    int r = 0;
    const std::size_t w = rows.empty() ? 0 : rows[0].size();
    for (std::size_t col = 0; col < w && r < static_cast<int>(rows.size()); ++col) {
      std::size_t piv = r;
      while (piv < rows.size() && !rows[piv][col]) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[r]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(i) != r && rows[i][col]) {
          for (std::size_t c = 0; c < w; ++c) rows[i][c] = rows[i][c] != rows[r][c];
        }
      }
      ++r;
    }
    return r;
  }

  Row boundary(const Simplex& s) const {
    Row row(width(), false);
    if (s.size() == 1) return row;
    for (int slot = 0; slot < s.size(); ++slot) row[index_.at(s.facet(slot))] = true;
    return row;
  }

  std::vector<Row> boundaries(int k, double b) const {
    std::vector<Row> rows;
    for (const auto& f : complex_.simplices) {
      if (f.simplex.dim() == k + 1 && f.value <= b) rows.push_back(boundary(f.simplex));
    }
    return rows;
  }

  // Kernel basis of the boundary map on k-chains of K_a, via elimination on
  // the augmented matrix [boundary | identity].
  std::vector<Row> cycles(int k, double a) const {
    std::vector<std::size_t> chains;
    for (std::size_t i = 0; i < width(); ++i) {
      const auto& f = complex_.simplices[i];
      if (f.simplex.dim() == k && f.value <= a) chains.push_back(i);
    }
    const std::size_t w = width();
    std::vector<Row> rows;
    for (std::size_t t = 0; t < chains.size(); ++t) {
      Row r = boundary(complex_.simplices[chains[t]].simplex);
      r.resize(2 * w, false);
      r[w + chains[t]] = true;
      rows.push_back(std::move(r));
    }
    std::size_t done = 0;
    for (std::size_t col = 0; col < w && done < rows.size(); ++col) {
      std::size_t piv = done;
      while (piv < rows.size() && !rows[piv][col]) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[done]);
      for (std::size_t i = done + 1; i < rows.size(); ++i) {
        if (rows[i][col]) {
          for (std::size_t c = 0; c < 2 * w; ++c) rows[i][c] = rows[i][c] != rows[done][c];
        }
      }
      ++done;
    }
    std::vector<Row> out;
    for (std::size_t i = done; i < rows.size(); ++i) out.emplace_back(rows[i].begin() + w, rows[i].end());
    return out;
  }

  const FilteredComplex& complex_;
  std::map<Simplex, std::size_t> index_;
};

}  // namespace rankfield::testing
