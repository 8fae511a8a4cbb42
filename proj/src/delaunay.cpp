#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "rankfield/errors.hpp"
#include "rankfield/geometry.hpp"
#include "rankfield/predicates.hpp"

namespace rankfield {
namespace {

constexpr int kInfinite = -1;

template <int D>
class Triangulation {
 public:
  using Point = std::array<double, D>;

  explicit Triangulation(const PointPattern& pattern) {
    pts_.resize(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const auto p = pattern.point(i);
      std::copy(p.begin(), p.end(), pts_[i].begin());
    }
  }

  void build() {
    reject_duplicates();
    const auto seed = initial_simplex();
    std::vector<bool> used(pts_.size(), false);
    for (int v : seed) used[v] = true;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (!used[i]) insert(i);
    }
  }

  std::vector<Simplex> finite_cells() const {
    std::vector<Simplex> out;
    for (const auto& c : cells_) {
      if (!c.alive || is_ghost(c)) continue;
      out.emplace_back(std::span<const int>(c.v.data(), D + 1));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Cell {
    std::array<int, D + 1> v;
    std::array<int, D + 1> nb;
    bool alive = true;
  };

  static bool is_ghost(const Cell& c) {
    return std::find(c.v.begin(), c.v.end(), kInfinite) != c.v.end();
  }
  static int slot_of(const Cell& c, int vertex) {
    return static_cast<int>(std::find(c.v.begin(), c.v.end(), vertex) - c.v.begin());
  }

  const double* coords(int v) const { return pts_[v].data(); }

  int orient(const std::array<int, D + 1>& v) const {
    if constexpr (D == 2) {
      return predicates::orient2d(coords(v[0]), coords(v[1]), coords(v[2]));
    } else {
      return predicates::orient3d(coords(v[0]), coords(v[1]), coords(v[2]), coords(v[3]));
    }
  }

  // Orientation of cell `c` with the vertex in `slot` replaced by point p.
  int orient_replaced(const Cell& c, int slot, int p) const {
    auto v = c.v;
    v[slot] = p;
    return orient(v);
  }

  // p strictly inside the circumsphere of the finite facet `f` (D vertices),
  // assuming p lies in the facet's affine hull.
  bool inside_facet_sphere(const std::array<int, D>& f, int p) const {
    if constexpr (D == 2) {
      return predicates::dot_sign(coords(f[0]), coords(f[1]), coords(p), 2) < 0;
    } else {
      // Any sphere through the facet vertices cuts the facet plane in the
      // facet's circumcircle, so an off-plane helper point decides it.
      for (int axis = 0; axis < 3; ++axis) {
        Point q = pts_[f[0]];
        q[axis] += 1.0;
        const int o = predicates::orient3d(coords(f[0]), coords(f[1]), coords(f[2]), q.data());
        if (o == 0) continue;
        const int s =
            predicates::insphere(coords(f[0]), coords(f[1]), coords(f[2]), q.data(), coords(p));
        return s * o > 0;
      }
      return false;
    }
  }

  bool in_conflict(const Cell& c, int p) const {
    const int inf_slot = slot_of(c, kInfinite);
    if (inf_slot <= D) {
      const int o = orient_replaced(c, inf_slot, p);
      if (o != 0) return o > 0;
      std::array<int, D> f{};
      for (int i = 0, j = 0; i <= D; ++i) {
        if (i != inf_slot) f[j++] = c.v[i];
      }
      return inside_facet_sphere(f, p);
    }
    if constexpr (D == 2) {
      return predicates::incircle(coords(c.v[0]), coords(c.v[1]), coords(c.v[2]), coords(p)) > 0;
    } else {
      return predicates::insphere(coords(c.v[0]), coords(c.v[1]), coords(c.v[2]),
                                  coords(c.v[3]), coords(p)) > 0;
    }
  }

  void reject_duplicates() const {
    std::vector<int> order(pts_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return pts_[a] != pts_[b] ? pts_[a] < pts_[b] : a < b;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (pts_[order[i]] == pts_[order[i - 1]]) {
        throw DuplicatePoints("points " + std::to_string(order[i - 1]) + " and " +
                              std::to_string(order[i]) + " coincide");
      }
    }
  }

  bool collinear(int a, int b, int c) const {
    if constexpr (D == 2) {
      return predicates::orient2d(coords(a), coords(b), coords(c)) == 0;
    } else {
      // Collinear in 3D iff collinear in all three coordinate projections.
      for (int drop = 0; drop < 3; ++drop) {
        std::array<double, 2> pa{}, pb{}, pc{};
        for (int k = 0, j = 0; k < 3; ++k) {
          if (k == drop) continue;
          pa[j] = pts_[a][k];
          pb[j] = pts_[b][k];
          pc[j] = pts_[c][k];
          ++j;
        }
        if (predicates::orient2d(pa.data(), pb.data(), pc.data()) != 0) return false;
      }
      return true;
    }
  }

  std::array<int, D + 1> initial_simplex() {
    const int n = static_cast<int>(pts_.size());
    if (n < D + 1) {
      throw DegenerateInput("need at least " + std::to_string(D + 1) + " points, got " +
                            std::to_string(n));
    }
    std::array<int, D + 1> s{};
    s[0] = 0;
    s[1] = 1;  // duplicates already rejected
    int next = 2;
    for (; next < n && collinear(s[0], s[1], next); ++next) {
    }
    if (next == n) throw DegenerateInput("all points are collinear");
    s[2] = next;
    if constexpr (D == 3) {
      for (next = 2; next < n; ++next) {
        if (next == s[2]) continue;
        if (predicates::orient3d(coords(s[0]), coords(s[1]), coords(s[2]), coords(next)) != 0) {
          break;
        }
      }
      if (next == n) throw DegenerateInput("all points are coplanar");
      s[3] = next;
    }
    if (orient(s) < 0) std::swap(s[0], s[1]);

    std::vector<Cell> initial;
    initial.push_back(Cell{s, {}, true});
    for (int i = 0; i <= D; ++i) {
      Cell g{s, {}, true};
      g.v[i] = kInfinite;
      // Flip orientation so that "infinity replaced by p" is positive
      // exactly when p is beyond the hull facet.
      const int a = (i + 1) % (D + 1), b = (i + 2) % (D + 1);
      std::swap(g.v[a], g.v[b]);
      initial.push_back(g);
    }
    std::vector<int> ids;
    for (auto& c : initial) ids.push_back(allocate(c));
    link(ids);
    last_ = ids[0];
    return s;
  }

  int allocate(const Cell& c) {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      cells_[id] = c;
      return id;
    }
    cells_.push_back(c);
    return static_cast<int>(cells_.size()) - 1;
  }

  using FacetKey = std::array<int, D>;

  FacetKey facet_key(const Cell& c, int omit) const {
    FacetKey k{};
    for (int i = 0, j = 0; i <= D; ++i) {
      if (i != omit) k[j++] = c.v[i];
    }
    std::sort(k.begin(), k.end());
    return k;
  }

  // Pairs up shared facets among the given cells.
  void link(const std::vector<int>& ids) {
    struct Entry {
      FacetKey key;
      int cell;
      int slot;
    };
    std::vector<Entry> entries;
    for (int id : ids) {
      for (int i = 0; i <= D; ++i) entries.push_back({facet_key(cells_[id], i), id, i});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
      if (entries[i].key == entries[i + 1].key) {
        cells_[entries[i].cell].nb[entries[i].slot] = entries[i + 1].cell;
        cells_[entries[i + 1].cell].nb[entries[i + 1].slot] = entries[i].cell;
        ++i;
      }
    }
  }

  int locate(int p) {
    int c = last_;
    if (!cells_[c].alive) c = first_alive();
    if (is_ghost(cells_[c])) c = cells_[c].nb[slot_of(cells_[c], kInfinite)];
    int prev = -1;
    const std::size_t max_steps = 4 * cells_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Cell& cell = cells_[c];
      if (is_ghost(cell)) return c;
      bool moved = false;
      for (int k = 0; k <= D; ++k) {
        const int i = static_cast<int>((k + walk_offset_) % (D + 1));
        if (cell.nb[i] == prev) continue;
        if (orient_replaced(cell, i, p) < 0) {
          prev = c;
          c = cell.nb[i];
          moved = true;
          break;
        }
      }
      ++walk_offset_;
      if (!moved) return c;
    }
    // Walk did not settle; fall back to a scan.
    for (int id = 0; id < static_cast<int>(cells_.size()); ++id) {
      if (cells_[id].alive && in_conflict(cells_[id], p)) return id;
    }
    throw DegenerateInput("point location failed for point " + std::to_string(p));
  }

  int first_alive() const {
    for (int id = 0; id < static_cast<int>(cells_.size()); ++id) {
      if (cells_[id].alive) return id;
    }
    return 0;
  }

  void insert(int p) {
    const int start = locate(p);
    ++stamp_;
    mark_.resize(cells_.size(), 0);
    cavity_.clear();
    cavity_.push_back(start);
    mark_[start] = stamp_;
    struct Boundary {
      int cell;
      int slot;
    };
    std::vector<Boundary> boundary;
    for (std::size_t head = 0; head < cavity_.size(); ++head) {
      const int c = cavity_[head];
      for (int i = 0; i <= D; ++i) {
        const int n = cells_[c].nb[i];
        if (mark_[n] == stamp_) continue;
        if (mark_[n] == -stamp_) {
          boundary.push_back({c, i});
          continue;
        }
        if (in_conflict(cells_[n], p)) {
          mark_[n] = stamp_;
          cavity_.push_back(n);
        } else {
          mark_[n] = -stamp_;
          boundary.push_back({c, i});
        }
      }
    }

    std::vector<int> created;
    created.reserve(boundary.size());
    for (const auto& b : boundary) {
      Cell fresh = cells_[b.cell];
      fresh.v[b.slot] = p;
      const int outside = cells_[b.cell].nb[b.slot];
      const int id = allocate(fresh);
      cells_[id].nb[b.slot] = outside;
      Cell& o = cells_[outside];
      for (int j = 0; j <= D; ++j) {
        if (o.nb[j] == b.cell) {
          o.nb[j] = id;
          break;
        }
      }
      created.push_back(id);
    }
    link_around(created, p);
    for (int c : cavity_) {
      cells_[c].alive = false;
      free_.push_back(c);
    }
    mark_.resize(cells_.size(), 0);
    last_ = created.front();
  }

  // Links the new cells to each other across the facets containing p.
  void link_around(const std::vector<int>& created, int p) {
    struct Entry {
      FacetKey key;
      int cell;
      int slot;
    };
    std::vector<Entry> entries;
    for (int id : created) {
      const Cell& c = cells_[id];
      const int ps = slot_of(c, p);
      for (int i = 0; i <= D; ++i) {
        if (i != ps) entries.push_back({facet_key(c, i), id, i});
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });
    for (std::size_t i = 0; i + 1 < entries.size(); i += 2) {
      if (entries[i].key != entries[i + 1].key) {
        throw DegenerateInput("inconsistent cavity while inserting point " + std::to_string(p));
      }
      cells_[entries[i].cell].nb[entries[i].slot] = entries[i + 1].cell;
      cells_[entries[i + 1].cell].nb[entries[i + 1].slot] = entries[i].cell;
    }
  }

  std::vector<Point> pts_;
  std::vector<Cell> cells_;
  std::vector<int> free_;
  std::vector<int> mark_;
  std::vector<int> cavity_;
  int stamp_ = 0;
  int last_ = 0;
  std::size_t walk_offset_ = 0;
};

}  // namespace

std::vector<Simplex> delaunay(const PointPattern& pattern) {
  if (pattern.dim() == 2) {
    Triangulation<2> t(pattern);
    t.build();
    return t.finite_cells();
  }
  if (pattern.dim() == 3) {
    Triangulation<3> t(pattern);
    t.build();
    return t.finite_cells();
  }
  throw InvalidArgument("delaunay supports 2D and 3D patterns only");
}

}  // namespace rankfield
