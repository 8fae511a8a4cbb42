#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "rankfield/errors.hpp"
#include "rankfield/geometry.hpp"

namespace rankfield {

std::size_t FilteredComplex::vertex_count() const {
  return static_cast<std::size_t>(std::count_if(
      simplices.begin(), simplices.end(), [](const auto& s) { return s.simplex.size() == 1; }));
}

int FilteredComplex::max_dim() const {
  int m = -1;
  for (const auto& s : simplices) m = std::max(m, s.simplex.dim());
  return m;
}

double Sphere::radius() const { return std::sqrt(radius_squared); }

bool circumsphere(std::span<const double* const> points, int dim, Sphere& out) {
  // Solved in extended precision: near-flat hull cells have large, badly
  // conditioned circumspheres.
  using Real = long double;
  const int k = static_cast<int>(points.size()) - 1;
  if (k < 0 || k > 3) return false;
  const double* p0 = points[0];
  out.center.assign(p0, p0 + dim);
  out.radius_squared = 0.0;
  if (k == 0) return true;

  Real u[3][3] = {};
  Real g[3][4] = {};  // augmented Gram system
  Real scale = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < dim; ++a) u[i][a] = static_cast<Real>(points[i + 1][a]) - p0[a];
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Real s = 0.0;
      for (int a = 0; a < dim; ++a) s += u[i][a] * u[j][a];
      g[i][j] = s;
    }
    g[i][k] = 0.5L * g[i][i];
    scale = std::max(scale, g[i][i]);
  }
  const Real rhs[3] = {g[0][k], g[1][k], g[2][k]};

  // Gaussian elimination with partial pivoting on the k x k system.
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::fabs(g[r][col]) > std::fabs(g[piv][col])) piv = r;
    }
    if (std::fabs(g[piv][col]) <= 1e-14L * scale) return false;
    if (piv != col) {
      for (int c = 0; c <= k; ++c) std::swap(g[piv][c], g[col][c]);
    }
    for (int r = col + 1; r < k; ++r) {
      const Real f = g[r][col] / g[col][col];
      for (int c = col; c <= k; ++c) g[r][c] -= f * g[col][c];
    }
  }
  Real lambda[3] = {};
  for (int r = k - 1; r >= 0; --r) {
    Real s = g[r][k];
    for (int c = r + 1; c < k; ++c) s -= g[r][c] * lambda[c];
    lambda[r] = s / g[r][r];
  }
  Real r2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    Real c = p0[a];
    for (int i = 0; i < k; ++i) c += lambda[i] * u[i][a];
    out.center[a] = static_cast<double>(c);
  }
  for (int i = 0; i < k; ++i) r2 += lambda[i] * rhs[i];
  out.radius_squared = static_cast<double>(r2);
  return true;
}

namespace {

std::vector<const double*> vertex_coords(const PointPattern& pattern, const Simplex& s) {
  std::vector<const double*> pts;
  for (int v : s.vertices()) pts.push_back(pattern.point(v).data());
  return pts;
}

double squared_distance(const double* a, std::span<const double> b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

double min_enclosing_ball_radius(const PointPattern& pattern, std::span<const int> subset) {
  const int dim = pattern.dim();
  const int m = static_cast<int>(subset.size());
  if (m == 0) throw InvalidArgument("minimum enclosing ball of an empty set");
  if (m > 30) throw TooLarge("minimum enclosing ball brute force is limited to 30 points");
  double best = std::numeric_limits<double>::infinity();
  const int max_support = std::min(m, dim + 1);
  // Enumerate supports as bitmasks of size 1..dim+1.
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const int bits = __builtin_popcount(mask);
    if (bits > max_support) continue;
    std::vector<const double*> support;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) support.push_back(pattern.point(subset[i]).data());
    }
    Sphere s;
    if (!circumsphere(support, dim, s)) continue;
    if (s.radius_squared >= best) continue;
    const double slack = 1e-12 * s.radius_squared + 1e-300;
    bool encloses = true;
    for (int i = 0; i < m && encloses; ++i) {
      if (mask & (1u << i)) continue;
      encloses = squared_distance(pattern.point(subset[i]).data(), s.center, dim) <=
                 s.radius_squared + slack;
    }
    if (encloses) best = s.radius_squared;
  }
  return std::sqrt(best);
}

FilteredComplex alpha_filtration(const PointPattern& pattern) {
  const auto cells = delaunay(pattern);
  return alpha_filtration(pattern, cells);
}

FilteredComplex alpha_filtration(const PointPattern& pattern, std::span<const Simplex> cells) {
  const int d = pattern.dim();
  std::vector<std::vector<Simplex>> layer(d + 1);
  layer[d].assign(cells.begin(), cells.end());
  std::sort(layer[d].begin(), layer[d].end());
  for (int k = d; k >= 1; --k) {
    auto& lower = layer[k - 1];
    for (const auto& s : layer[k]) {
      for (int slot = 0; slot <= k; ++slot) lower.push_back(s.facet(slot));
    }
    std::sort(lower.begin(), lower.end());
    lower.erase(std::unique(lower.begin(), lower.end()), lower.end());
  }

  std::vector<std::vector<double>> value(d + 1);
  for (int k = 0; k <= d; ++k) value[k].assign(layer[k].size(), 0.0);

  Sphere sphere;
  for (std::size_t i = 0; i < layer[d].size(); ++i) {
    if (!circumsphere(vertex_coords(pattern, layer[d][i]), d, sphere)) {
      throw DegenerateInput("flat Delaunay cell " + layer[d][i].to_string());
    }
    value[d][i] = sphere.radius();
  }

  for (int k = d - 1; k >= 1; --k) {
    // Cofaces of each k-simplex, with the vertex each coface adds.
    struct Coface {
      std::size_t index;
      int apex;
    };
    std::vector<std::vector<Coface>> cof(layer[k].size());
    for (std::size_t j = 0; j < layer[k + 1].size(); ++j) {
      const auto& s = layer[k + 1][j];
      for (int slot = 0; slot <= k + 1; ++slot) {
        const auto f = s.facet(slot);
        const auto it = std::lower_bound(layer[k].begin(), layer[k].end(), f);
        cof[it - layer[k].begin()].push_back({j, s[slot]});
      }
    }
    for (std::size_t i = 0; i < layer[k].size(); ++i) {
      if (!circumsphere(vertex_coords(pattern, layer[k][i]), d, sphere)) {
        throw DegenerateInput("degenerate Delaunay face " + layer[k][i].to_string());
      }
      bool gabriel = true;
      double coface_min = std::numeric_limits<double>::infinity();
      for (const auto& c : cof[i]) {
        coface_min = std::min(coface_min, value[k + 1][c.index]);
        if (squared_distance(pattern.point(c.apex).data(), sphere.center, d) <
            sphere.radius_squared) {
          gabriel = false;
        }
      }
      value[k][i] = gabriel ? std::min(sphere.radius(), coface_min) : coface_min;
    }
  }

  FilteredComplex out;
  out.ambient_dim = d;
  for (int k = 0; k <= d; ++k) {
    for (std::size_t i = 0; i < layer[k].size(); ++i) {
      out.simplices.push_back({layer[k][i], value[k][i]});
    }
  }
  return out;
}

FilteredComplex cech_oracle(const PointPattern& pattern, int max_dim, std::size_t max_points) {
  const int n = static_cast<int>(pattern.size());
  if (pattern.size() > max_points) {
    throw TooLarge("Čech oracle limited to " + std::to_string(max_points) + " points, got " +
                   std::to_string(n));
  }
  if (max_dim < 0 || max_dim > n - 1 || max_dim > pattern.dim()) {
    throw InvalidArgument("Čech oracle max_dim must lie in [0, min(n-1, d)]");
  }
  FilteredComplex out;
  out.ambient_dim = pattern.dim();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int bits = __builtin_popcount(mask);
    if (bits > max_dim + 1) continue;
    std::vector<int> verts;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) verts.push_back(i);
    }
    const double v = bits == 1 ? 0.0 : min_enclosing_ball_radius(pattern, verts);
    out.simplices.push_back({Simplex(verts), v});
  }
  std::sort(out.simplices.begin(), out.simplices.end(), [](const auto& a, const auto& b) {
    return a.simplex.size() != b.simplex.size() ? a.simplex.size() < b.simplex.size()
                                                : a.simplex < b.simplex;
  });
  return out;
}

bool is_valid_filtration(const FilteredComplex& complex) {
  std::unordered_map<Simplex, double, SimplexHash> values;
  for (const auto& s : complex.simplices) {
    if (!std::isfinite(s.value) || s.value < 0) return false;
    if (!values.emplace(s.simplex, s.value).second) return false;
  }
  for (const auto& s : complex.simplices) {
    if (s.simplex.size() == 1) continue;
    for (int slot = 0; slot < s.simplex.size(); ++slot) {
      const auto it = values.find(s.simplex.facet(slot));
      if (it == values.end() || it->second > s.value) return false;
    }
  }
  return true;
}

}  // namespace rankfield
