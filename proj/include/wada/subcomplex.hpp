#pragma once
// Pure-dimensional subcomplexes: a sorted set of canonical cells of one
// dimension at one refinement level.  The face closure (span) is implicit;
// membership of lower cells is answered by search, never by materializing
// the closure.

#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

#include "wada/complex.hpp"
#include "wada/cube.hpp"

namespace wada {

class Subcomplex {
 public:
  const CubicalComplex* cx = nullptr;
  int dim = 0;
  int level = 0;
  std::vector<CubeRef> cells;  // canonical, sorted, unique

  Subcomplex() = default;
  Subcomplex(const CubicalComplex& c, int d, int lvl) : cx(&c), dim(d), level(lvl) {}

  static Subcomplex make(const CubicalComplex& c, int d, int lvl,
                         std::vector<CubeRef> raw) {
    Subcomplex s(c, d, lvl);
    s.cells.reserve(raw.size());
    for (const CubeRef& q : raw) {
      assert(q.level == lvl);
      assert(q.dim(c.n) == d);
      s.cells.push_back(c.canonical(q));
    }
    s.normalize();
    return s;
  }

  // The whole complex at level 0: one cube per chart.
  static Subcomplex whole(const CubicalComplex& c) {
    Subcomplex s(c, c.n, 0);
    s.cells.reserve(size_t(c.num_charts));
    for (int32_t i = 0; i < c.num_charts; ++i) s.cells.push_back(chart_cube(i));
    return s;
  }

  void normalize() {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }

  size_t size() const { return cells.size(); }
  bool empty() const { return cells.empty(); }

  // Membership of a top cell (canonicalized before lookup).
  bool contains(const CubeRef& q) const {
    CubeRef c = cx->canonical(q);
    return std::binary_search(cells.begin(), cells.end(), c);
  }

  // Index of a top cell in the sorted generator list, or -1.
  int32_t index_of(const CubeRef& q) const {
    CubeRef c = cx->canonical(q);
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || *it != c) return -1;
    return int32_t(it - cells.begin());
  }

  // Is the cell x in the span (face closure)?  x may have any dimension
  // <= dim; level must match.
  bool span_contains(const CubeRef& x) const {
    if (x.level != level) return false;
    int xd = x.dim(cx->n);
    if (xd > dim) return false;
    if (xd == dim) return contains(x);
    std::vector<CubeRef> reps;
    cx->orbit(x, reps);
    int64_t side = pow3(x.level);
    for (const CubeRef& r : reps) {
      // promote (dim - xd) of r's point axes to intervals, all ways
      std::vector<CubeRef> cand{r};
      for (int a = 0; a < cx->n; ++a) {
        if (!r.point_axis(a)) continue;
        size_t sz = cand.size();
        for (size_t i = 0; i < sz; ++i) {
          CubeRef base = cand[i];
          for (int o = base.origin[a] - 1; o <= base.origin[a]; ++o) {
            if (o < 0 || o >= side) continue;
            CubeRef c = base;
            c.point_mask &= uint8_t(~(1u << a));
            c.origin[a] = o;
            cand.push_back(c);
          }
        }
      }
      for (const CubeRef& c : cand)
        if (c.dim(cx->n) == dim && contains(c)) return true;
    }
    return false;
  }

  // One 3-adic refinement step applied `steps` times.
  Subcomplex refine(int steps = 1) const {
    Subcomplex cur = *this;
    std::vector<CubeRef> kids;
    for (int s = 0; s < steps; ++s) {
      Subcomplex next(*cx, dim, cur.level + 1);
      next.cells.reserve(cur.cells.size() * size_t(pow3(dim)));
      for (const CubeRef& q : cur.cells) {
        children(q, cx->n, kids);
        for (const CubeRef& k : kids) next.cells.push_back(cx->canonical(k));
      }
      next.normalize();
      cur = std::move(next);
    }
    return cur;
  }

  // All d-dimensional faces of the cells, deduplicated.
  Subcomplex skeleton(int d) const {
    assert(d <= dim);
    Subcomplex s(*cx, d, level);
    std::vector<CubeRef> fs;
    for (const CubeRef& q : cells) {
      enumerate_faces_of_dim(q, cx->n, d, fs);
      for (const CubeRef& f : fs) s.cells.push_back(cx->canonical(f));
    }
    s.normalize();
    return s;
  }

  // One-sided (dim-1)-faces: faces contained in exactly one cell of this
  // subcomplex, counted over (cell, face-slot) pairs so that a face reached
  // twice from the same cell through a self-gluing still counts as two-sided.
  Subcomplex boundary() const {
    std::vector<CubeRef> fs, all;
    for (const CubeRef& q : cells) {
      enumerate_faces_of_dim(q, cx->n, dim - 1, fs);
      for (const CubeRef& f : fs) all.push_back(cx->canonical(f));
    }
    std::sort(all.begin(), all.end());
    Subcomplex b(*cx, dim - 1, level);
    for (size_t i = 0; i < all.size();) {
      size_t j = i;
      while (j < all.size() && all[j] == all[i]) ++j;
      if (j - i == 1) b.cells.push_back(all[i]);
      i = j;
    }
    return b;  // already sorted and unique
  }

  // Star of a subcomplex: the cells of THIS subcomplex meeting |S|, i.e.
  // containing some cell of the span of S.  (Top-cell set; span implicit.)
  Subcomplex star_of(const Subcomplex& S) const {
    assert(S.level == level);
    Subcomplex st(*cx, dim, level);
    std::vector<CubeRef> cand, fs;
    for (const CubeRef& s : S.cells) {
      enumerate_faces(s, cx->n, fs);
      for (const CubeRef& f : fs) {
        cells_containing(f, cand);
        for (const CubeRef& c : cand)
          if (contains(c)) st.cells.push_back(c);
      }
    }
    st.normalize();
    return st;
  }

  // Star of a single cell: cells of THIS subcomplex that contain s fully.
  Subcomplex star_of_cell(const CubeRef& s) const {
    Subcomplex st(*cx, dim, level);
    std::vector<CubeRef> cand;
    cells_containing(s, cand);
    for (const CubeRef& c : cand)
      if (contains(c)) st.cells.push_back(c);
    st.normalize();
    return st;
  }

  // All dim-dimensional cells of the ambient complex containing cell s
  // (not restricted to this subcomplex).
  void cells_containing(const CubeRef& s, std::vector<CubeRef>& out) const {
    out.clear();
    std::vector<CubeRef> reps;
    cx->orbit(s, reps);
    int64_t side = pow3(s.level);
    for (const CubeRef& r : reps) {
      std::vector<CubeRef> cand{r};
      for (int a = 0; a < cx->n; ++a) {
        if (!r.point_axis(a)) continue;
        size_t sz = cand.size();
        for (size_t i = 0; i < sz; ++i) {
          CubeRef base = cand[i];
          for (int o = base.origin[a] - 1; o <= base.origin[a]; ++o) {
            if (o < 0 || o >= side) continue;
            CubeRef c = base;
            c.point_mask &= uint8_t(~(1u << a));
            c.origin[a] = o;
            cand.push_back(c);
          }
        }
      }
      for (const CubeRef& c : cand)
        if (c.dim(cx->n) == dim) out.push_back(cx->canonical(c));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  // Top-cell set operations (same dim and level).
  Subcomplex set_minus(const Subcomplex& o) const {
    assert(o.dim == dim && o.level == level);
    Subcomplex r(*cx, dim, level);
    std::set_difference(cells.begin(), cells.end(), o.cells.begin(),
                        o.cells.end(), std::back_inserter(r.cells));
    return r;
  }

  Subcomplex set_union(const Subcomplex& o) const {
    assert(o.dim == dim && o.level == level);
    Subcomplex r(*cx, dim, level);
    std::set_union(cells.begin(), cells.end(), o.cells.begin(), o.cells.end(),
                   std::back_inserter(r.cells));
    return r;
  }

  Subcomplex set_intersect(const Subcomplex& o) const {
    assert(o.dim == dim && o.level == level);
    Subcomplex r(*cx, dim, level);
    std::set_intersection(cells.begin(), cells.end(), o.cells.begin(),
                          o.cells.end(), std::back_inserter(r.cells));
    return r;
  }

  bool set_equal(const Subcomplex& o) const {
    return dim == o.dim && level == o.level && cells == o.cells;
  }

  bool disjoint_from(const Subcomplex& o) const {
    assert(o.dim == dim && o.level == level);
    auto i = cells.begin();
    auto j = o.cells.begin();
    while (i != cells.end() && j != o.cells.end()) {
      if (*i < *j)
        ++i;
      else if (*j < *i)
        ++j;
      else
        return false;
    }
    return true;
  }
};

}  // namespace wada
