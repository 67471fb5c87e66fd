#pragma once
// Rectangular runs of same-shape cells, for working at refinement depths
// where per-cell containers are too large.  A Box denotes every CubeRef with
// the given chart/level/point_mask whose origin lies in the closed per-axis
// range [lo[a], hi[a]].  Span axes are unit intervals [o, o+1]; point axes
// are planes {o}, and a range of planes is a legal box.
//
// A BoxSet keeps its boxes pairwise disjoint at all times, so counting is
// a sum and equality is mutual subtraction to empty.  Boxes never mix cells
// from different charts; gluing transport is explicit (transport_box) and
// only defined for boxes lying inside a glued chart face.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wada/base.hpp"
#include "wada/complex.hpp"
#include "wada/cube.hpp"
#include "wada/subcomplex.hpp"

namespace wada {

// Cell counts at deep levels overflow int64 (a full chart at level 19 in
// dimension 3 holds 3^57 cubes), so counts are 128-bit.
using BigCount = unsigned __int128;

inline BigCount big_pow3(int e) {
  BigCount r = 1;
  while (e-- > 0) r *= 3;
  return r;
}

inline std::string big_to_string(BigCount v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

struct Box {
  int32_t chart = 0;
  int8_t level = 0;
  uint8_t point_mask = 0;
  std::array<int32_t, MAXN> lo{0, 0, 0, 0};
  std::array<int32_t, MAXN> hi{0, 0, 0, 0};

  friend auto operator<=>(const Box&, const Box&) = default;

  bool point_axis(int a) const { return (point_mask >> a) & 1; }
  int dim(int n) const {
    int d = n;
    for (int a = 0; a < n; ++a)
      if (point_axis(a)) --d;
    return d;
  }
};

inline Box box_of(const CubeRef& q, int n) {
  Box b;
  b.chart = q.chart;
  b.level = q.level;
  b.point_mask = q.point_mask;
  for (int a = 0; a < n; ++a) b.lo[a] = b.hi[a] = q.origin[a];
  return b;
}

// All n-cubes of one chart at the given level.
inline Box chart_box(int32_t chart, int level, int n) {
  Box b;
  b.chart = chart;
  b.level = int8_t(level);
  int32_t side = int32_t(pow3(level));
  for (int a = 0; a < n; ++a) {
    b.lo[a] = 0;
    b.hi[a] = side - 1;
  }
  return b;
}

inline bool box_valid(const Box& b, int n) {
  if (b.level < 0 || b.level > MAXLEVEL) return false;
  int64_t side = pow3(b.level);
  for (int a = 0; a < n; ++a) {
    if (b.lo[a] > b.hi[a] || b.lo[a] < 0) return false;
    int64_t max = b.point_axis(a) ? side : side - 1;
    if (b.hi[a] > max) return false;
  }
  return true;
}

inline BigCount box_count(const Box& b, int n) {
  BigCount c = 1;
  for (int a = 0; a < n; ++a) c *= BigCount(int64_t(b.hi[a]) - b.lo[a] + 1);
  return c;
}

inline bool box_contains(const Box& b, const CubeRef& q, int n) {
  if (q.chart != b.chart || q.level != b.level || q.point_mask != b.point_mask)
    return false;
  for (int a = 0; a < n; ++a)
    if (q.origin[a] < b.lo[a] || q.origin[a] > b.hi[a]) return false;
  return true;
}

// Lexicographically least cell of the box (low corner).
inline CubeRef least_cell(const Box& b, int n) {
  CubeRef q;
  q.chart = b.chart;
  q.level = b.level;
  q.point_mask = b.point_mask;
  for (int a = 0; a < n; ++a) q.origin[a] = b.lo[a];
  return q;
}

inline std::optional<Box> box_intersect(const Box& a, const Box& b, int n) {
  if (a.chart != b.chart || a.level != b.level || a.point_mask != b.point_mask)
    return std::nullopt;
  Box r = a;
  for (int ax = 0; ax < n; ++ax) {
    r.lo[ax] = std::max(a.lo[ax], b.lo[ax]);
    r.hi[ax] = std::min(a.hi[ax], b.hi[ax]);
    if (r.lo[ax] > r.hi[ax]) return std::nullopt;
  }
  return r;
}

// Appends the cells of a not in b as at most 2n disjoint boxes (guillotine
// split around the overlap, one axis at a time).
inline void box_subtract(const Box& a, const Box& b, int n,
                         std::vector<Box>& out) {
  std::optional<Box> ov = box_intersect(a, b, n);
  if (!ov) {
    out.push_back(a);
    return;
  }
  Box rest = a;
  for (int ax = 0; ax < n; ++ax) {
    if (rest.lo[ax] < ov->lo[ax]) {
      Box below = rest;
      below.hi[ax] = ov->lo[ax] - 1;
      out.push_back(below);
      rest.lo[ax] = ov->lo[ax];
    }
    if (rest.hi[ax] > ov->hi[ax]) {
      Box above = rest;
      above.lo[ax] = ov->hi[ax] + 1;
      out.push_back(above);
      rest.hi[ax] = ov->hi[ax];
    }
  }
}

// Level+t cells contained in the closed union of the box's cells.  Span
// ranges scale to full covers; each point-axis plane maps to the single
// deeper plane at the same position, so multi-plane boxes fan out.
inline void box_refine(const Box& b, int t, int n, std::vector<Box>& out) {
  assert(b.level + t <= MAXLEVEL);
  int32_t m = int32_t(pow3(t));
  Box base = b;
  base.level = int8_t(b.level + t);
  std::vector<Box> acc{base};
  for (int a = 0; a < n; ++a) {
    if (!b.point_axis(a)) {
      for (Box& x : acc) {
        x.lo[a] = b.lo[a] * m;
        x.hi[a] = b.hi[a] * m + (m - 1);
      }
      continue;
    }
    if (b.lo[a] == b.hi[a]) {
      for (Box& x : acc) x.lo[a] = x.hi[a] = b.lo[a] * m;
      continue;
    }
    std::vector<Box> next;
    next.reserve(acc.size() * size_t(b.hi[a] - b.lo[a] + 1));
    for (const Box& x : acc)
      for (int32_t p = b.lo[a]; p <= b.hi[a]; ++p) {
        Box y = x;
        y.lo[a] = y.hi[a] = p * m;
        next.push_back(y);
      }
    acc = std::move(next);
    assert(acc.size() <= (1u << 20));
  }
  out.insert(out.end(), acc.begin(), acc.end());
}

// Inverse of box_refine when the box is exactly a t-fold refinement of a
// coarser box.
inline std::optional<Box> box_coarsen_exact(const Box& b, int t, int n) {
  if (b.level < t) return std::nullopt;
  int32_t m = int32_t(pow3(t));
  Box r = b;
  r.level = int8_t(b.level - t);
  for (int a = 0; a < n; ++a) {
    if (b.point_axis(a)) {
      if (b.lo[a] != b.hi[a] || b.lo[a] % m != 0) return std::nullopt;
      r.lo[a] = r.hi[a] = b.lo[a] / m;
    } else {
      if (b.lo[a] % m != 0 || (b.hi[a] + 1) % m != 0) return std::nullopt;
      r.lo[a] = b.lo[a] / m;
      r.hi[a] = (b.hi[a] + 1) / m - 1;
    }
  }
  return r;
}

// Outer face layer of the box on side s of span axis a: the (dim-1)-cells
// face_cell(q, a, s) over the box's outermost cells along a.
inline Box face_box(const Box& b, int a, int side) {
  assert(!b.point_axis(a));
  Box f = b;
  f.point_mask |= uint8_t(1u << a);
  f.lo[a] = f.hi[a] = (side == 0 ? b.lo[a] : b.hi[a] + 1);
  return f;
}

// Every axis-a wall touching the box's cells: the planes lo[a]..hi[a]+1
// over the box's extent, as one multi-plane box.
inline Box wall_slab(const Box& b, int a) {
  assert(!b.point_axis(a));
  Box f = b;
  f.point_mask |= uint8_t(1u << a);
  f.lo[a] = b.lo[a];
  f.hi[a] = b.hi[a] + 1;
  return f;
}

// Applies a signed axis map (Gluing::perm encoding) sending this box's chart
// onto target_chart, mirroring CubicalComplex::transfer on ranges: under a
// flip, point planes map o -> side - o and span cells o -> side - 1 - o.
inline Box apply_axis_map(const Box& b, int32_t target_chart,
                          const std::array<int8_t, MAXN>& map, int n) {
  int64_t side = pow3(b.level);
  Box r;
  r.chart = target_chart;
  r.level = b.level;
  r.point_mask = 0;
  for (int i = 0; i < n; ++i) {
    int j = std::abs(map[i]) - 1;
    bool flip = map[i] < 0;
    if (b.point_axis(i)) {
      r.point_mask |= uint8_t(1u << j);
      r.lo[j] = int32_t(flip ? side - b.hi[i] : b.lo[i]);
      r.hi[j] = int32_t(flip ? side - b.lo[i] : b.hi[i]);
    } else {
      r.lo[j] = int32_t(flip ? side - 1 - b.hi[i] : b.lo[i]);
      r.hi[j] = int32_t(flip ? side - 1 - b.lo[i] : b.hi[i]);
    }
  }
  return r;
}

// Rewrites a box lying in a glued chart face in the neighbouring chart's
// coordinates.  The face's normal axis must be a point axis of the box
// pinned at the face plane.
inline Box transport_box(const CubicalComplex& cx, const Box& b, int face) {
  int a = face / 2;
  int side = face % 2;
  int64_t plane = side == 0 ? 0 : pow3(b.level);
  assert(b.point_axis(a) && b.lo[a] == plane && b.hi[a] == plane);
  (void)a;
  (void)plane;
  int32_t other = 0;
  std::array<int8_t, MAXN> perm = cx.face_perm(b.chart, face, other);
  return apply_axis_map(b, other, perm, cx.n);
}

// Per-axis geometric gap between two same-chart boxes, in level-grid units:
// zero when the closed supports meet on that axis.  Grid extents are
// [lo, hi+1] for span axes and [lo, hi] for point axes.
inline int64_t axis_gap(const Box& a, const Box& b, int ax) {
  int64_t alo = a.lo[ax], ahi = a.hi[ax] + (a.point_axis(ax) ? 0 : 1);
  int64_t blo = b.lo[ax], bhi = b.hi[ax] + (b.point_axis(ax) ? 0 : 1);
  return std::max<int64_t>({0, blo - ahi, alo - bhi});
}

inline int64_t box_gap_linf(const Box& a, const Box& b, int n) {
  assert(a.chart == b.chart && a.level == b.level);
  int64_t g = 0;
  for (int ax = 0; ax < n; ++ax) g = std::max(g, axis_gap(a, b, ax));
  return g;
}

inline int64_t box_gap_l1(const Box& a, const Box& b, int n) {
  assert(a.chart == b.chart && a.level == b.level);
  int64_t g = 0;
  for (int ax = 0; ax < n; ++ax) g += axis_gap(a, b, ax);
  return g;
}

// Do two disjoint same-chart n-cube boxes contain a face-adjacent pair of
// cubes?  Exactly one axis with origin ranges at distance 1, all others
// sharing an origin value.
inline bool cube_boxes_face_adjacent(const Box& a, const Box& b, int n) {
  assert(a.point_mask == 0 && b.point_mask == 0);
  if (a.chart != b.chart || a.level != b.level) return false;
  int ones = 0;
  for (int ax = 0; ax < n; ++ax) {
    int64_t g = std::max<int64_t>(
        {0, int64_t(b.lo[ax]) - a.hi[ax], int64_t(a.lo[ax]) - b.hi[ax]});
    if (g > 1) return false;
    if (g == 1) ++ones;
  }
  return ones == 1;
}

// The shared wall of a face-adjacent cube-box pair, as an (n-1)-cell box in
// the common chart.
inline Box contact_wall(const Box& a, const Box& b, int n) {
  assert(cube_boxes_face_adjacent(a, b, n));
  Box w;
  w.chart = a.chart;
  w.level = a.level;
  for (int ax = 0; ax < n; ++ax) {
    int64_t g = std::max<int64_t>(
        {0, int64_t(b.lo[ax]) - a.hi[ax], int64_t(a.lo[ax]) - b.hi[ax]});
    if (g == 1) {
      w.point_mask |= uint8_t(1u << ax);
      w.lo[ax] = w.hi[ax] = (b.lo[ax] > a.hi[ax]) ? b.lo[ax] : a.lo[ax];
    } else {
      w.lo[ax] = std::max(a.lo[ax], b.lo[ax]);
      w.hi[ax] = std::min(a.hi[ax], b.hi[ax]);
    }
  }
  return w;
}

// A set of pairwise disjoint boxes.  add() splits the incoming box around
// existing ones, so membership and counting never double-count.
class BoxSet {
 public:
  explicit BoxSet(int n) : n_(n) {}

  int n() const { return n_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  size_t size() const { return boxes_.size(); }
  void clear() { boxes_.clear(); }

  BigCount count() const {
    BigCount c = 0;
    for (const Box& b : boxes_) c += box_count(b, n_);
    return c;
  }

  bool contains(const CubeRef& q) const {
    for (const Box& b : boxes_)
      if (box_contains(b, q, n_)) return true;
    return false;
  }

  bool contains_box(const Box& x) const {
    std::vector<Box> rest{x};
    std::vector<Box> next;
    for (const Box& b : boxes_) {
      next.clear();
      for (const Box& r : rest) box_subtract(r, b, n_, next);
      rest.swap(next);
      if (rest.empty()) return true;
    }
    return rest.empty();
  }

  bool intersects(const Box& x) const {
    for (const Box& b : boxes_)
      if (box_intersect(b, x, n_)) return true;
    return false;
  }

  BigCount intersect_count(const Box& x) const {
    BigCount c = 0;
    for (const Box& b : boxes_)
      if (auto ov = box_intersect(b, x, n_)) c += box_count(*ov, n_);
    return c;
  }

  void add(const Box& x) {
    assert(box_valid(x, n_));
    std::vector<Box> rest{x};
    std::vector<Box> next;
    for (const Box& b : boxes_) {
      if (rest.empty()) return;
      next.clear();
      for (const Box& r : rest) box_subtract(r, b, n_, next);
      rest.swap(next);
    }
    boxes_.insert(boxes_.end(), rest.begin(), rest.end());
  }

  void add_set(const BoxSet& other) {
    assert(other.n_ == n_);
    for (const Box& b : other.boxes_) add(b);
  }

  void subtract(const Box& x) {
    std::vector<Box> out;
    out.reserve(boxes_.size());
    for (const Box& b : boxes_) box_subtract(b, x, n_, out);
    boxes_.swap(out);
  }

  void subtract_set(const BoxSet& other) {
    assert(other.n_ == n_);
    for (const Box& b : other.boxes_) subtract(b);
  }

  void intersect_set(const BoxSet& other) {
    assert(other.n_ == n_);
    std::vector<Box> out;
    for (const Box& b : boxes_)
      for (const Box& x : other.boxes_)
        if (auto ov = box_intersect(b, x, n_)) out.push_back(*ov);
    boxes_.swap(out);
  }

  bool equal(const BoxSet& other) const {
    assert(other.n_ == n_);
    if (count() != other.count()) return false;
    BoxSet d = *this;
    d.subtract_set(other);
    return d.empty();
  }

  // Merges mergeable neighbours axis by axis until a fixpoint; also sorts.
  // Keeps representations small and, for a fixed construction order,
  // deterministic.
  void coalesce() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < n_ && !changed; ++a) changed = coalesce_axis(a);
    }
    std::sort(boxes_.begin(), boxes_.end());
  }

  // Emits every cell; returns false (leaving out untouched) over budget.
  bool enumerate(std::vector<CubeRef>& out, BigCount budget) const {
    if (count() > budget) return false;
    out.clear();
    out.reserve(size_t(count()));
    for (const Box& b : boxes_) {
      CubeRef q = least_cell(b, n_);
      while (true) {
        out.push_back(q);
        int a = 0;
        for (; a < n_; ++a) {
          if (q.origin[a] < b.hi[a]) {
            ++q.origin[a];
            break;
          }
          q.origin[a] = b.lo[a];
        }
        if (a == n_) break;
      }
    }
    return true;
  }

  // Canonicalized materialization into a per-cell subcomplex; the set must
  // be dimension- and level-homogeneous.  Throws over budget: callers must
  // keep materialization windows small by design.
  Subcomplex materialize(const CubicalComplex& cx, BigCount budget) const {
    std::vector<CubeRef> cells;
    if (!enumerate(cells, budget))
      throw VerificationError("MaterializeBudget",
                              "box set holds " + big_to_string(count()) +
                                  " cells, budget " + big_to_string(budget));
    int dim = boxes_.empty() ? n_ : boxes_.front().dim(n_);
    int level = boxes_.empty() ? 0 : boxes_.front().level;
    for (const Box& b : boxes_) {
      assert(b.dim(n_) == dim && b.level == level);
      (void)b;
    }
    for (CubeRef& q : cells) q = cx.canonical(q);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    Subcomplex s(cx, dim, level);
    s.cells = std::move(cells);
    return s;
  }

 private:
  int n_;
  std::vector<Box> boxes_;

  bool coalesce_axis(int a) {
    auto key_less = [&](const Box& x, const Box& y) {
      if (x.chart != y.chart) return x.chart < y.chart;
      if (x.level != y.level) return x.level < y.level;
      if (x.point_mask != y.point_mask) return x.point_mask < y.point_mask;
      for (int i = 0; i < n_; ++i) {
        if (i == a) continue;
        if (x.lo[i] != y.lo[i]) return x.lo[i] < y.lo[i];
        if (x.hi[i] != y.hi[i]) return x.hi[i] < y.hi[i];
      }
      return x.lo[a] < y.lo[a];
    };
    std::sort(boxes_.begin(), boxes_.end(), key_less);
    bool merged = false;
    std::vector<Box> out;
    out.reserve(boxes_.size());
    for (const Box& b : boxes_) {
      if (!out.empty()) {
        Box& p = out.back();
        bool same = p.chart == b.chart && p.level == b.level &&
                    p.point_mask == b.point_mask;
        for (int i = 0; same && i < n_; ++i)
          if (i != a) same = p.lo[i] == b.lo[i] && p.hi[i] == b.hi[i];
        if (same && p.hi[a] + 1 == b.lo[a]) {
          p.hi[a] = b.hi[a];
          merged = true;
          continue;
        }
      }
      out.push_back(b);
    }
    boxes_.swap(out);
    return merged;
  }
};

// Singleton-box set over explicit cells (then coalesced): the bridge from
// per-cell fixtures into box algebra.
inline BoxSet boxset_of_cells(const std::vector<CubeRef>& cells, int n) {
  BoxSet s(n);
  for (const CubeRef& q : cells) s.add(box_of(q, n));
  s.coalesce();
  return s;
}

}  // namespace wada
