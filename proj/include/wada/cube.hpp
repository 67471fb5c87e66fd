#pragma once
// Integer references to cells of a 3-adically refined chart.
//
// A chart is [0,1]^n.  At refinement level k its cells live on the 3^k grid:
// axis a of a cell is either an interval [o, o+1] in grid units
// (o in [0, 3^k - 1]) or a point {o} (o in [0, 3^k]).  Point axes are flagged
// in point_mask.  The cell's dimension is the number of interval axes.

#include <array>
#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <vector>

#include "wada/base.hpp"

namespace wada {

struct CubeRef {
  int32_t chart = 0;
  int8_t level = 0;
  uint8_t point_mask = 0;
  std::array<int32_t, MAXN> origin{0, 0, 0, 0};

  friend auto operator<=>(const CubeRef&, const CubeRef&) = default;

  bool point_axis(int a) const { return (point_mask >> a) & 1; }
  int dim(int n) const {
    return n - std::popcount(static_cast<unsigned>(point_mask) &
                             ((1u << n) - 1));
  }
};

// The level-0 unit cube of a chart.
inline CubeRef chart_cube(int32_t chart) {
  CubeRef q;
  q.chart = chart;
  return q;
}

// Does q (chart-locally) contain x as a face?  Both at the same level.
inline bool contains_cell(const CubeRef& q, const CubeRef& x, int n) {
  if (q.chart != x.chart || q.level != x.level) return false;
  for (int a = 0; a < n; ++a) {
    if (q.point_axis(a)) {
      if (!x.point_axis(a) || x.origin[a] != q.origin[a]) return false;
    } else {
      if (x.point_axis(a)) {
        if (x.origin[a] != q.origin[a] && x.origin[a] != q.origin[a] + 1)
          return false;
      } else {
        if (x.origin[a] != q.origin[a]) return false;
      }
    }
  }
  return true;
}

// The face of q obtained by demoting interval axis a to one of its endpoints
// (side 0: lower, side 1: upper).
inline CubeRef face_cell(const CubeRef& q, int a, int side) {
  assert(!q.point_axis(a));
  CubeRef f = q;
  f.point_mask |= uint8_t(1u << a);
  f.origin[a] = q.origin[a] + side;
  return f;
}

// All faces of q of every dimension, q itself included (3^dim cells).
inline void enumerate_faces(const CubeRef& q, int n,
                            std::vector<CubeRef>& out) {
  out.clear();
  out.push_back(q);
  for (int a = 0; a < n; ++a) {
    if (q.point_axis(a)) continue;
    size_t sz = out.size();
    for (size_t i = 0; i < sz; ++i) {
      out.push_back(face_cell(out[i], a, 0));
      out.push_back(face_cell(out[i], a, 1));
    }
  }
}

// All faces of q of dimension exactly d (q itself when d == dim).
inline void enumerate_faces_of_dim(const CubeRef& q, int n, int d,
                                   std::vector<CubeRef>& out) {
  out.clear();
  std::vector<CubeRef> all;
  enumerate_faces(q, n, all);
  for (const CubeRef& f : all)
    if (f.dim(n) == d) out.push_back(f);
}

// The 3^dim level+1 cells whose union is q.
inline void children(const CubeRef& q, int n, std::vector<CubeRef>& out) {
  out.clear();
  CubeRef base = q;
  base.level = int8_t(q.level + 1);
  for (int a = 0; a < n; ++a) base.origin[a] = 3 * q.origin[a];
  out.push_back(base);
  for (int a = 0; a < n; ++a) {
    if (q.point_axis(a)) continue;
    size_t sz = out.size();
    for (size_t i = 0; i < sz; ++i) {
      for (int d = 1; d <= 2; ++d) {
        CubeRef c = out[i];
        c.origin[a] = 3 * q.origin[a] + d;
        out.push_back(c);
      }
    }
  }
}

// The unique level-1-coarser cell of the same dimension whose refinement
// contains q, when it exists.
inline bool try_parent(const CubeRef& q, int n, CubeRef& out) {
  assert(q.level > 0);
  out = q;
  out.level = int8_t(q.level - 1);
  for (int a = 0; a < n; ++a) {
    if (q.point_axis(a)) {
      if (q.origin[a] % 3 != 0) return false;
      out.origin[a] = q.origin[a] / 3;
    } else {
      out.origin[a] = q.origin[a] / 3;
    }
  }
  return true;
}

// The level-l ancestor of a full-dimensional cube (always exists).
inline CubeRef cube_ancestor(const CubeRef& q, int n, int l) {
  assert(l <= q.level);
  CubeRef a = q;
  int64_t div = pow3(q.level - l);
  a.level = int8_t(l);
  for (int ax = 0; ax < n; ++ax) {
    if (a.point_axis(ax))
      a.origin[ax] = int32_t(q.origin[ax] / div);  // only valid on boundaries
    else
      a.origin[ax] = int32_t(q.origin[ax] / div);
  }
  return a;
}

// Is x (at a deeper level) a refinement-cell of c (same dimension pattern not
// required): true iff the closed cell |x| lies inside |c|.
inline bool refines_into(const CubeRef& x, const CubeRef& c, int n) {
  if (x.chart != c.chart || x.level < c.level) return false;
  int64_t s = pow3(x.level - c.level);
  for (int a = 0; a < n; ++a) {
    int64_t lo, hi;  // closed range of x on axis a, in level-x units
    if (x.point_axis(a)) {
      lo = hi = x.origin[a];
    } else {
      lo = x.origin[a];
      hi = x.origin[a] + 1;
    }
    int64_t clo, chi;  // closed range of c, scaled to level-x units
    if (c.point_axis(a)) {
      clo = chi = c.origin[a] * s;
    } else {
      clo = c.origin[a] * s;
      chi = (c.origin[a] + 1) * s;
    }
    if (lo < clo || hi > chi) return false;
  }
  return true;
}

}  // namespace wada
