#include "rankfield/persistence.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "rankfield/errors.hpp"

namespace rankfield {

std::size_t PersistenceDiagram::essential_count(int dim) const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [dim](const auto& p) {
    return p.dim == dim && p.essential();
  }));
}

std::vector<DiagramPoint> PersistenceDiagram::in_dim(int dim) const {
  std::vector<DiagramPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out),
               [dim](const auto& p) { return p.dim == dim; });
  return out;
}

int PersistenceDiagram::max_dim() const {
  int m = -1;
  for (const auto& p : points) m = std::max(m, p.dim);
  return m;
}

void PersistenceDiagram::sort() {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
}

namespace {

using Column = std::vector<int>;  // sorted row indices

// In-place symmetric difference of sorted index vectors.
void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& complex) {
  const auto& simplices = complex.simplices;
  const int n = static_cast<int>(simplices.size());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& sa = simplices[a];
    const auto& sb = simplices[b];
    if (sa.value != sb.value) return sa.value < sb.value;
    if (sa.simplex.size() != sb.simplex.size()) return sa.simplex.size() < sb.simplex.size();
    return sa.simplex < sb.simplex;
  });

  std::unordered_map<Simplex, int, SimplexHash> position;
  position.reserve(n * 2);
  for (int i = 0; i < n; ++i) {
    if (!position.emplace(simplices[order[i]].simplex, i).second) {
      throw InvalidArgument("simplex " + simplices[order[i]].simplex.to_string() +
                            " listed twice");
    }
  }

  int top = 0;
  std::vector<Column> columns(n);
  for (int i = 0; i < n; ++i) {
    const auto& s = simplices[order[i]].simplex;
    top = std::max(top, s.dim());
    if (s.size() == 1) continue;
    for (int slot = 0; slot < s.size(); ++slot) {
      const auto it = position.find(s.facet(slot));
      if (it == position.end() || it->second > i) {
        throw InvalidArgument("face of " + s.to_string() + " missing or ordered after it");
      }
      columns[i].push_back(it->second);
    }
    std::sort(columns[i].begin(), columns[i].end());
  }

  const auto dim_of = [&](int i) { return simplices[order[i]].simplex.dim(); };
  const auto value_of = [&](int i) { return simplices[order[i]].value; };

  std::vector<int> pivot_owner(n, -1);  // row -> column whose lowest one it is
  std::vector<bool> cleared(n, false);
  Column scratch;
  for (int d = top; d >= 1; --d) {
    for (int j = 0; j < n; ++j) {
      if (dim_of(j) != d || cleared[j]) continue;
      auto& col = columns[j];
      while (!col.empty()) {
        const int low = col.back();
        const int owner = pivot_owner[low];
        if (owner < 0) break;
        add_column(col, columns[owner], scratch);
      }
      if (!col.empty()) {
        const int low = col.back();
        pivot_owner[low] = j;
        // A positive simplex that kills nothing further; its column is zero.
        cleared[low] = true;
        columns[low].clear();
      }
    }
  }

  PersistenceDiagram diagram;
  std::vector<bool> paired(n, false);
  for (int row = 0; row < n; ++row) {
    const int j = pivot_owner[row];
    if (j < 0) continue;
    paired[row] = paired[j] = true;
    const double birth = value_of(row);
    const double death = value_of(j);
    if (birth != death) diagram.points.push_back({dim_of(row), birth, death});
  }
  for (int i = 0; i < n; ++i) {
    if (!paired[i] && columns[i].empty()) {
      diagram.points.push_back({dim_of(i), value_of(i), kInfinity});
    }
  }
  diagram.sort();
  return diagram;
}

}  // namespace rankfield
