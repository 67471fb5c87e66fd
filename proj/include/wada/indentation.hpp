#pragma once
// Spectral decomposition of refined regions and the validation of dents:
// cube-indentations over boundary walls, star-indentations around boundary
// edges, their combination rules, wedge-separation certificates, and the
// round-by-round flattening schedule that removes a dent smallest-cubes-first.
//
// Everything here works on materialized per-cell subcomplexes; deep-level
// structures are validated through windows that the caller materializes.
// Contact analysis uses canonical closure cells at the fine level, so cells
// identified across gluings are handled exactly.

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wada/box.hpp"
#include "wada/complex.hpp"
#include "wada/cube.hpp"
#include "wada/graphs.hpp"
#include "wada/subcomplex.hpp"

namespace wada {

namespace detail {

// Closed geometric extents of a cell, in lattice units of a finer level.
// Only meaningful chart-locally.
struct Reg {
  std::array<int64_t, MAXN> lo{0, 0, 0, 0};
  std::array<int64_t, MAXN> hi{0, 0, 0, 0};
};

inline Reg reg_of(const CubeRef& q, int level, int n) {
  assert(level >= q.level);
  int64_t s = pow3(level - q.level);
  Reg r;
  for (int a = 0; a < n; ++a) {
    r.lo[a] = q.origin[a] * s;
    r.hi[a] = q.point_axis(a) ? q.origin[a] * s : (q.origin[a] + 1) * s;
  }
  return r;
}

inline int64_t reg_gap_linf(const Reg& a, const Reg& b, int n) {
  int64_t g = 0;
  for (int ax = 0; ax < n; ++ax)
    g = std::max(g, std::max<int64_t>({0, b.lo[ax] - a.hi[ax],
                                       a.lo[ax] - b.hi[ax]}));
  return g;
}

// Canonical faces (all dimensions, the cell included) of a cell.
inline void canonical_faces(const CubicalComplex& cx, const CubeRef& q,
                            std::vector<CubeRef>& out) {
  std::vector<CubeRef> fs;
  enumerate_faces(q, cx.n, fs);
  out.clear();
  out.reserve(fs.size());
  for (const CubeRef& f : fs) out.push_back(cx.canonical(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// All canonical cells (every dimension) in the closure of a cell's carrier,
// expressed at a given finer level.
inline std::vector<CubeRef> closure_cells_at(const CubicalComplex& cx,
                                             const CubeRef& q, int level) {
  std::vector<Box> fine;
  box_refine(box_of(q, cx.n), level - q.level, cx.n, fine);
  BoxSet window(cx.n);
  for (const Box& b : fine) window.add(b);
  std::vector<CubeRef> cells;
  bool ok = window.enumerate(cells, BigCount(1) << 24);
  assert(ok);
  (void)ok;
  std::set<CubeRef> acc;
  std::vector<CubeRef> fs;
  for (const CubeRef& c : cells) {
    canonical_faces(cx, c, fs);
    acc.insert(fs.begin(), fs.end());
  }
  return std::vector<CubeRef>(acc.begin(), acc.end());
}

// Memoized closures at one fine level, shared by the pairwise analyses.
class ClosureCache {
 public:
  ClosureCache(const CubicalComplex& c, int fine) : cx_(&c), fine_(fine) {}

  const std::vector<CubeRef>& of(const CubeRef& q) {
    auto it = memo_.find(q);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(q, closure_cells_at(*cx_, q, fine_)).first->second;
  }

  std::vector<CubeRef> shared(const CubeRef& a, const CubeRef& b) {
    const std::vector<CubeRef>& ca = of(a);
    const std::vector<CubeRef>& cb = of(b);
    std::vector<CubeRef> out;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                          std::back_inserter(out));
    return out;
  }

  bool meet(const CubeRef& a, const CubeRef& b) {
    return !shared(a, b).empty();
  }

  int fine() const { return fine_; }

 private:
  const CubicalComplex* cx_;
  int fine_;
  std::map<CubeRef, std::vector<CubeRef>> memo_;
};

// Do the closed carriers of two cells meet?  Exact across charts.
inline bool carriers_meet(const CubicalComplex& cx, const CubeRef& a,
                          const CubeRef& b) {
  int lvl = std::max(a.level, b.level);
  ClosureCache cc(cx, lvl);
  return cc.meet(a, b);
}

// Maximal cells of |X| ∩ |Y| for two pure complexes at the same level:
// faces of X's cells whose carrier lies in |Y|, with dominated cells removed.
inline std::vector<CubeRef> carrier_intersection(const CubicalComplex& cx,
                                                 const Subcomplex& X,
                                                 const Subcomplex& Y) {
  assert(X.level == Y.level);
  std::set<CubeRef> kept;
  std::vector<CubeRef> fs;
  for (const CubeRef& q : X.cells) {
    canonical_faces(cx, q, fs);
    for (const CubeRef& f : fs)
      if (Y.span_contains(f)) kept.insert(f);
  }
  // Drop every cell that is a strict face of another kept cell.
  std::set<CubeRef> dominated;
  for (const CubeRef& g : kept) {
    canonical_faces(cx, g, fs);
    for (const CubeRef& f : fs)
      if (f != g && kept.count(f)) dominated.insert(f);
  }
  std::vector<CubeRef> out;
  for (const CubeRef& g : kept)
    if (!dominated.count(g)) out.push_back(g);
  return out;
}

// Groups cells into components whose closed carriers form connected unions.
inline std::vector<std::vector<CubeRef>> carrier_components(
    const CubicalComplex& cx, const std::vector<CubeRef>& cells) {
  size_t m = cells.size();
  int lvl = 0;
  for (const CubeRef& c : cells) lvl = std::max(lvl, int(c.level));
  ClosureCache cc(cx, lvl);
  DisjointSet ds{int32_t(m)};
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (cc.meet(cells[i], cells[j])) ds.unite(int32_t(i), int32_t(j));
  std::map<int32_t, std::vector<CubeRef>> groups;
  for (size_t i = 0; i < m; ++i)
    groups[ds.find(int32_t(i))].push_back(cells[i]);
  std::vector<std::vector<CubeRef>> out;
  for (auto& [root, g] : groups) {
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

// Per-rank maximal-cube decomposition of an n-region inside a refined
// complex: rank r holds the cubes of level base_level + r whose carrier lies
// in the region and in no coarser such cube.
struct Spectrum {
  int n = 0;
  int base_level = 0;
  int top_level = 0;
  std::vector<Subcomplex> ranks;  // ranks[r] at level base_level + r

  bool rank_empty(int r) const {
    return r < 0 || r >= int(ranks.size()) || ranks[size_t(r)].empty();
  }

  int deepest_rank() const {
    for (int r = int(ranks.size()) - 1; r >= 0; --r)
      if (!rank_empty(r)) return r;
    return -1;
  }

  int occupied_ranks() const {
    int c = 0;
    for (int r = 0; r < int(ranks.size()); ++r)
      if (!rank_empty(r)) ++c;
    return c;
  }

  // All maximal cubes, coarsest rank first.
  std::vector<CubeRef> cubes() const {
    std::vector<CubeRef> out;
    for (const Subcomplex& s : ranks)
      out.insert(out.end(), s.cells.begin(), s.cells.end());
    return out;
  }

  size_t cube_count() const {
    size_t c = 0;
    for (const Subcomplex& s : ranks) c += s.size();
    return c;
  }

  // The region reassembled from the rank windows; equals the input region.
  Subcomplex reassemble(const CubicalComplex& cx) const {
    BoxSet acc(n);
    for (const Subcomplex& s : ranks)
      for (const CubeRef& q : s.cells) {
        std::vector<Box> w;
        box_refine(box_of(q, n), top_level - q.level, n, w);
        for (const Box& b : w) acc.add(b);
      }
    return acc.materialize(cx, BigCount(1) << 40);
  }
};

inline Spectrum spectrum(const CubicalComplex& cx, const Subcomplex& P,
                         int base_level) {
  assert(P.dim == cx.n);
  assert(P.level >= base_level);
  Spectrum sp;
  sp.n = cx.n;
  sp.base_level = base_level;
  sp.top_level = P.level;
  int k = P.level - base_level;
  sp.ranks.assign(size_t(k) + 1, Subcomplex{});
  std::vector<CubeRef> remaining = P.cells;
  for (int r = 0; r <= k; ++r) {
    int lvl = base_level + r;
    int t = P.level - lvl;
    BigCount want = big_pow3(t * cx.n);
    std::map<CubeRef, int64_t> per_ancestor;
    for (const CubeRef& q : remaining)
      per_ancestor[cube_ancestor(q, cx.n, lvl)]++;
    std::vector<CubeRef> found;
    for (const auto& [anc, cnt] : per_ancestor)
      if (BigCount(cnt) == want) found.push_back(anc);
    sp.ranks[size_t(r)] = Subcomplex::make(cx, cx.n, lvl, found);
    if (found.empty()) continue;
    std::vector<CubeRef> rest;
    rest.reserve(remaining.size());
    for (const CubeRef& q : remaining)
      if (!sp.ranks[size_t(r)].contains(cube_ancestor(q, cx.n, lvl)))
        rest.push_back(q);
    remaining.swap(rest);
    if (remaining.empty()) break;
  }
  assert(remaining.empty());
  return sp;
}

namespace detail {

// Does cube Q have a face contained in the open cell of the wall q?  The
// cubes behind a one-sided wall live in the chart of q's matching orbit
// representation, so the test is chart-local per representation.
inline bool face_inside_wall_rep(const CubeRef& Q, const CubeRef& qrep, int n,
                                 int fine_level) {
  if (Q.chart != qrep.chart) return false;
  int wall_axis = -1;
  for (int a = 0; a < n; ++a)
    if (qrep.point_axis(a)) wall_axis = a;
  assert(wall_axis >= 0);
  Reg rq = reg_of(qrep, fine_level, n);
  Reg rQ = reg_of(Q, fine_level, n);
  if (rQ.lo[wall_axis] != rq.lo[wall_axis] &&
      rQ.hi[wall_axis] != rq.lo[wall_axis])
    return false;  // neither face of Q lies on the wall plane
  for (int a = 0; a < n; ++a) {
    if (a == wall_axis) continue;
    if (rQ.lo[a] <= rq.lo[a] || rQ.hi[a] >= rq.hi[a])
      return false;  // the face touches the wall's own boundary
  }
  return true;
}

inline bool face_inside_wall(const CubicalComplex& cx, const CubeRef& Q,
                             const CubeRef& q, int fine_level,
                             CubeRef* matched_rep = nullptr) {
  std::vector<CubeRef> reps;
  cx.orbit(q, reps);
  for (const CubeRef& r : reps)
    if (face_inside_wall_rep(Q, r, cx.n, fine_level)) {
      if (matched_rep) *matched_rep = r;
      return true;
    }
  return false;
}

// The face of Q lying on the wall plane of qrep, canonical.
inline CubeRef wall_face_of(const CubicalComplex& cx, const CubeRef& Q,
                            const CubeRef& qrep, int fine_level) {
  int n = cx.n;
  int wall_axis = -1;
  for (int a = 0; a < n; ++a)
    if (qrep.point_axis(a)) wall_axis = a;
  Reg rq = reg_of(qrep, fine_level, n);
  Reg rQ = reg_of(Q, fine_level, n);
  int side = (rQ.lo[wall_axis] == rq.lo[wall_axis]) ? 0 : 1;
  return cx.canonical(face_cell(Q, wall_axis, side));
}

// The fine cells of the refinement window of one cell (any dimension).
inline Subcomplex cell_window(const CubicalComplex& cx, const CubeRef& c,
                              int fine_level) {
  std::vector<Box> w;
  box_refine(box_of(c, cx.n), fine_level - c.level, cx.n, w);
  BoxSet bs(cx.n);
  for (const Box& b : w) bs.add(b);
  return bs.materialize(cx, BigCount(1) << 24);
}

}  // namespace detail

// A dent over one boundary wall q: every maximal cube has a face strictly
// inside |q|, ranks 0 and 1 are empty, no three maximal cubes share a point,
// and pairwise contacts are full faces of the finer cube (a finer cube
// reaching a coarser one touches exactly two of its faces, one on the wall).
struct CubeIndentationReport {
  bool valid = true;
  std::string violation;
  CubeRef over;
  Spectrum spec;
};

inline CubeIndentationReport validate_cube_indentation(
    const CubicalComplex& cx, const Subcomplex& D, const CubeRef& q,
    int base_level) {
  CubeIndentationReport rep;
  rep.over = cx.canonical(q);
  auto fail = [&](const std::string& why) {
    rep.valid = false;
    if (rep.violation.empty()) rep.violation = why;
  };
  rep.spec.n = cx.n;
  rep.spec.base_level = base_level;
  rep.spec.top_level = base_level;
  if (D.empty()) return rep;
  const int n = cx.n;
  const int fine = D.level;
  rep.spec = spectrum(cx, D, base_level);
  if (!rep.spec.rank_empty(0) || !rep.spec.rank_empty(1))
    fail("a maximal cube of the dent has rank 0 or 1");

  std::vector<CubeRef> cubes = rep.spec.cubes();
  const size_t m = cubes.size();
  std::vector<CubeRef> wall_rep(m);
  for (size_t i = 0; i < m; ++i) {
    if (!detail::face_inside_wall(cx, cubes[i], q, fine, &wall_rep[i])) {
      fail("a maximal cube has no face strictly inside the wall");
      return rep;
    }
  }

  // Pairwise contact analysis on canonical closure cells.
  detail::ClosureCache cc(cx, fine);
  std::vector<std::vector<size_t>> meets(m);
  std::map<std::pair<size_t, size_t>, std::vector<CubeRef>> contact;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      std::vector<CubeRef> I = cc.shared(cubes[i], cubes[j]);
      if (I.empty()) continue;
      meets[i].push_back(j);
      meets[j].push_back(i);
      size_t fi = cubes[i].level >= cubes[j].level ? i : j;  // finer
      size_t co = fi == i ? j : i;                           // coarser
      bool is_face = false;
      for (int a = 0; a < n && !is_face; ++a)
        for (int s = 0; s < 2 && !is_face; ++s) {
          CubeRef f = face_cell(cubes[fi], a, s);
          is_face = cc.of(f) == I;
        }
      if (!is_face)
        fail("two maximal cubes meet but not in a full face of the finer");
      if (is_face && cubes[fi].level > cubes[co].level) {
        // The finer cube touches exactly two faces of the coarser cube and
        // one of them is the coarser cube's face on the wall.
        int faces_met = 0;
        bool wall_met = false;
        CubeRef wf = detail::wall_face_of(cx, cubes[co], wall_rep[co], fine);
        for (int a = 0; a < n; ++a)
          for (int s = 0; s < 2; ++s) {
            CubeRef f = face_cell(cubes[co], a, s);
            if (!cc.shared(f, cubes[fi]).empty()) {
              ++faces_met;
              if (cx.canonical(f) == wf) wall_met = true;
            }
          }
        if (faces_met != 2 || !wall_met)
          fail("a finer cube reaches a coarser one away from its wall face");
      }
      contact[{i, j}] = std::move(I);
    }
  }

  // No point lies in three maximal cubes.
  for (size_t i = 0; i < m; ++i)
    for (size_t a = 0; a < meets[i].size(); ++a)
      for (size_t b = a + 1; b < meets[i].size(); ++b) {
        size_t ja = meets[i][a], jb = meets[i][b];
        if (ja > jb) std::swap(ja, jb);
        auto it = contact.find({ja, jb});
        if (it == contact.end()) continue;
        const std::vector<CubeRef>& cl = cc.of(cubes[i]);
        std::vector<CubeRef> triple;
        std::set_intersection(it->second.begin(), it->second.end(), cl.begin(),
                              cl.end(), std::back_inserter(triple));
        if (!triple.empty()) fail("three maximal cubes share a point");
      }

  // Contact-count consequences: at most two same-or-larger neighbours (on
  // opposite faces when two), at most one strictly larger.
  for (size_t i = 0; i < m; ++i) {
    std::vector<size_t> big;
    int larger = 0;
    for (size_t j : meets[i]) {
      if (cubes[j].level <= cubes[i].level) big.push_back(j);
      if (cubes[j].level < cubes[i].level) ++larger;
    }
    if (big.size() > 2)
      fail("a maximal cube meets three same-or-larger maximal cubes");
    if (larger > 1) fail("a maximal cube meets two larger maximal cubes");
    if (big.size() == 2) {
      // Each contact lies in a face of cube i; the two faces are opposite.
      auto contact_of = [&](size_t j) -> const std::vector<CubeRef>& {
        return contact[{std::min(i, j), std::max(i, j)}];
      };
      int axis0 = -1, side0 = -1, axis1 = -1, side1 = -1;
      for (int a = 0; a < n; ++a)
        for (int s = 0; s < 2; ++s) {
          const std::vector<CubeRef>& fc = cc.of(face_cell(cubes[i], a, s));
          auto inside = [&](const std::vector<CubeRef>& I) {
            return std::includes(fc.begin(), fc.end(), I.begin(), I.end());
          };
          if (inside(contact_of(big[0]))) axis0 = a, side0 = s;
          if (inside(contact_of(big[1]))) axis1 = a, side1 = s;
        }
      if (!(axis0 >= 0 && axis0 == axis1 && side0 != side1))
        fail("two same-or-larger contacts are not on opposite faces");
    }
  }
  return rep;
}

// A star-indentation: the refinement of a full star of an (n-2)-cell e,
// where e descends from an (n-2)-cell of the boundary of the base complex.
struct StarIndentationReport {
  bool valid = false;
  std::string violation;
  int star_level = 0;  // level of the defining star's cubes
  CubeRef core;        // e
  CubeRef emitter;     // the boundary (n-2)-cell e descends from
  Subcomplex star;     // the defining star
};

inline StarIndentationReport validate_star_indentation(
    const CubicalComplex& cx, const Subcomplex& A,
    const Subcomplex& ambient_base) {
  StarIndentationReport rep;
  rep.violation = "NotStarIndentation";
  const int n = cx.n;
  if (A.empty() || A.dim != n) return rep;
  const int base = ambient_base.level;
  if (A.level < base) return rep;
  Subcomplex bd_edges = ambient_base.boundary().skeleton(n - 2);

  for (int j = base; j <= A.level; ++j) {
    int t = A.level - j;
    std::map<CubeRef, int64_t> per_ancestor;
    for (const CubeRef& q : A.cells)
      per_ancestor[cube_ancestor(q, n, j)]++;
    BigCount want = big_pow3(t * n);
    bool full = true;
    std::vector<CubeRef> coarse;
    for (const auto& [anc, cnt] : per_ancestor) {
      if (BigCount(cnt) != want) {
        full = false;
        break;
      }
      coarse.push_back(anc);
    }
    if (!full) continue;
    Subcomplex S = Subcomplex::make(cx, n, j, coarse);

    // The candidate core: an (n-2)-face of the cubes of S whose full cube
    // star inside the ambient complex is S itself.
    std::vector<CubeRef> fs;
    enumerate_faces_of_dim(S.cells.front(), n, n - 2, fs);
    for (CubeRef e : fs) {
      e = cx.canonical(e);
      std::vector<CubeRef> around;
      cx.cubes_containing(e, around);
      std::vector<CubeRef> inside;
      for (const CubeRef& c : around)
        if (ambient_base.contains(cube_ancestor(c, n, base)))
          inside.push_back(c);
      std::sort(inside.begin(), inside.end());
      if (inside != S.cells) continue;

      // e must descend from a boundary (n-2)-cell of the base complex: on
      // its pinned axes the plane must sit on the coarse lattice.
      std::vector<CubeRef> reps;
      cx.orbit(e, reps);
      int64_t s = pow3(j - base);
      for (const CubeRef& r : reps) {
        CubeRef xi;
        xi.chart = r.chart;
        xi.level = int8_t(base);
        xi.point_mask = r.point_mask;
        bool aligned = true;
        for (int a = 0; a < n; ++a) {
          if (r.point_axis(a) && r.origin[a] % s != 0) {
            aligned = false;
            break;
          }
          xi.origin[a] = int32_t(r.origin[a] / s);
        }
        if (!aligned || !bd_edges.contains(xi)) continue;
        rep.valid = true;
        rep.violation.clear();
        rep.star_level = j;
        rep.core = e;
        rep.emitter = cx.canonical(xi);
        rep.star = S;
        return rep;
      }
    }
  }
  return rep;
}

// A dent system: cube-indentations over walls plus star-indentations around
// boundary edges, with the contact rules between them.
struct IndentationRecord {
  bool valid = true;
  std::string violation;
  int base_level = 0;
  int top_level = 0;
  std::vector<CubeIndentationReport> dents;
  std::vector<StarIndentationReport> stars;
  std::vector<Subcomplex> star_bodies;  // fine cells per star
  int cross_dent_components = 0;  // wall-to-wall contacts matched by stars
  int star_dent_contacts = 0;     // star-to-wall contacts verified
};

inline IndentationRecord validate_indentation(const CubicalComplex& cx,
                                              const Subcomplex& B,
                                              const Subcomplex& ambient_base) {
  IndentationRecord rec;
  rec.base_level = ambient_base.level;
  rec.top_level = B.empty() ? ambient_base.level : B.level;
  auto fail = [&](const std::string& why) {
    rec.valid = false;
    if (rec.violation.empty()) rec.violation = why;
  };
  if (B.empty()) return rec;
  const int n = cx.n;
  const int base = ambient_base.level;
  if (B.level < base) {
    fail("dent coarser than the ambient complex");
    return rec;
  }
  for (const CubeRef& c : B.cells)
    if (!ambient_base.contains(cube_ancestor(c, n, base))) {
      fail("dent reaches outside the ambient complex");
      return rec;
    }
  Subcomplex bd = ambient_base.boundary();

  // Assign each maximal cube to the wall it opens onto.  A cube with no wall
  // face goes to the star remainder; opening onto two walls is impossible
  // for a dent (the face would touch the wall's boundary).
  Spectrum sp = spectrum(cx, B, base);
  std::map<CubeRef, std::vector<CubeRef>> dent_cubes;  // wall -> cubes
  std::vector<CubeRef> star_pool;
  for (const CubeRef& Q : sp.cubes()) {
    std::vector<CubeRef> walls;
    for (const CubeRef& q : bd.cells)
      if (detail::face_inside_wall(cx, Q, q, B.level)) walls.push_back(q);
    if (walls.size() > 1) {
      fail("a maximal cube opens onto two walls");
      return rec;
    }
    if (walls.size() == 1)
      dent_cubes[walls[0]].push_back(Q);
    else
      star_pool.push_back(Q);
  }

  // Validate each wall dent on its own.
  std::map<CubeRef, Subcomplex> dent_bodies;
  for (auto& [q, cubes] : dent_cubes) {
    BoxSet acc(n);
    for (const CubeRef& Q : cubes) {
      std::vector<Box> w;
      box_refine(box_of(Q, n), B.level - Q.level, n, w);
      for (const Box& b : w) acc.add(b);
    }
    Subcomplex body = acc.materialize(cx, BigCount(1) << 24);
    CubeIndentationReport r = validate_cube_indentation(cx, body, q, base);
    if (!r.valid) fail(r.violation);
    dent_bodies[q] = std::move(body);
    rec.dents.push_back(std::move(r));
  }

  // The remainder must decompose into connected star-indentations.
  BoxSet star_acc(n);
  for (const CubeRef& Q : star_pool) {
    std::vector<Box> w;
    box_refine(box_of(Q, n), B.level - Q.level, n, w);
    for (const Box& b : w) star_acc.add(b);
  }
  if (!star_acc.empty()) {
    Subcomplex rest = star_acc.materialize(cx, BigCount(1) << 24);
    Graph g = build_adjacency(rest);
    std::vector<int32_t> comp = components(g);
    int32_t nc = component_count(comp);
    for (int32_t c = 0; c < nc; ++c) {
      std::vector<CubeRef> cells;
      for (size_t i = 0; i < rest.cells.size(); ++i)
        if (comp[i] == c) cells.push_back(rest.cells[i]);
      Subcomplex A = Subcomplex::make(cx, n, rest.level, cells);
      StarIndentationReport r = validate_star_indentation(cx, A, ambient_base);
      if (!r.valid) fail("remainder component is not a star-indentation");
      rec.star_bodies.push_back(std::move(A));
      rec.stars.push_back(std::move(r));
    }
  }
  if (!rec.valid) return rec;

  // Stars must be mutually disjoint as carriers.
  for (size_t i = 0; i < rec.star_bodies.size(); ++i)
    for (size_t j = i + 1; j < rec.star_bodies.size(); ++j)
      if (!detail::carrier_intersection(cx, rec.star_bodies[i],
                                        rec.star_bodies[j])
               .empty())
        fail("two star-indentations touch");

  // Wall-to-wall contacts: every contact component must be covered, exactly,
  // by a star emitted from a boundary edge shared by the two walls.
  std::vector<CubeRef> wall_list;
  for (const auto& [q, body] : dent_bodies) wall_list.push_back(q);
  for (size_t i = 0; i < wall_list.size(); ++i) {
    for (size_t j = i + 1; j < wall_list.size(); ++j) {
      const Subcomplex& Di = dent_bodies[wall_list[i]];
      const Subcomplex& Dj = dent_bodies[wall_list[j]];
      std::vector<CubeRef> I = detail::carrier_intersection(cx, Di, Dj);
      if (I.empty()) continue;
      std::sort(I.begin(), I.end());
      // Boundary edges shared by the two walls.
      std::vector<CubeRef> fi, fj, shared;
      detail::canonical_faces(cx, wall_list[i], fi);
      detail::canonical_faces(cx, wall_list[j], fj);
      std::set_intersection(fi.begin(), fi.end(), fj.begin(), fj.end(),
                            std::back_inserter(shared));
      std::vector<CubeRef> xis;
      for (const CubeRef& f : shared)
        if (f.dim(n) == n - 2) xis.push_back(f);
      if (xis.empty()) {
        fail("two touching wall dents share no boundary edge");
        continue;
      }
      for (const auto& comp : detail::carrier_components(cx, I)) {
        bool covered = false;
        for (size_t s = 0; s < rec.star_bodies.size() && !covered; ++s) {
          if (std::find(xis.begin(), xis.end(), rec.stars[s].emitter) ==
              xis.end())
            continue;
          bool all_in = true;
          for (const CubeRef& z : comp)
            if (!rec.star_bodies[s].span_contains(z)) {
              all_in = false;
              break;
            }
          if (!all_in) continue;
          // The star covers this component and nothing more of the contact.
          bool extra = false;
          for (const CubeRef& z : I)
            if (rec.star_bodies[s].span_contains(z) &&
                !std::binary_search(comp.begin(), comp.end(), z))
              extra = true;
          covered = !extra;
        }
        if (!covered)
          fail("a wall-to-wall contact component lacks a covering star");
        else
          ++rec.cross_dent_components;
      }
    }
  }

  // Star-to-wall contacts: each must be exactly one shared face of the
  // defining star and of an equal-sized maximal cube of the dent, where
  // that maximal cube stays clear of the star's emitter edge.
  for (size_t s = 0; s < rec.star_bodies.size(); ++s) {
    const StarIndentationReport& sr = rec.stars[s];
    for (auto& [q, body] : dent_bodies) {
      std::vector<CubeRef> I =
          detail::carrier_intersection(cx, rec.star_bodies[s], body);
      if (I.empty()) continue;
      std::sort(I.begin(), I.end());
      CubeIndentationReport* dr = nullptr;
      for (auto& d : rec.dents)
        if (d.over == cx.canonical(q)) dr = &d;
      assert(dr);
      bool matched = false;
      std::vector<CubeRef> fs;
      for (const CubeRef& sc : sr.star.cells) {
        enumerate_faces_of_dim(sc, n, n - 1, fs);
        for (const CubeRef& f : fs) {
          Subcomplex fw = detail::cell_window(cx, f, B.level);
          if (fw.cells != I) continue;
          // Also a face of an equal-sized maximal cube of this dent that
          // does not meet the emitter.
          for (const CubeRef& Q : dr->spec.cubes()) {
            if (Q.level != f.level) continue;
            std::vector<CubeRef> qf;
            enumerate_faces_of_dim(Q, n, n - 1, qf);
            bool face_of_dent = false;
            for (const CubeRef& g : qf)
              if (cx.canonical(g) == cx.canonical(f)) face_of_dent = true;
            if (!face_of_dent) continue;
            if (!detail::carriers_meet(cx, Q, sr.emitter)) matched = true;
          }
          if (matched) break;
        }
        if (matched) break;
      }
      if (!matched)
        fail("a star-to-wall contact is not a clean shared face");
      else
        ++rec.star_dent_contacts;
    }
  }
  return rec;
}

// Separation certificate for the dent's maximal pieces.  Disjoint pieces sit
// at least the side length of the finer one apart, so the wedges they grow
// stay disjoint.  For lattice-aligned pieces the distance bound follows from
// layer counting: crossing the gap between two non-touching pieces costs at
// least one full layer of cubes at the finer piece's level.  Where both
// pieces share a chart the certificate reports the exact margin.  No point
// may lie in three maximal cubes; points shared by two cubes and a star are
// the sanctioned bridge contacts.
struct WedgeCertificate {
  bool valid = true;
  std::string violation;
  int disjoint_pairs = 0;
  int touching_pairs = 0;
  int exact_pairs = 0;        // disjoint pairs measured chart-locally
  int64_t worst_margin = -1;  // min over exact pairs of gap - required
};

inline WedgeCertificate wedge_disjointness(const CubicalComplex& cx,
                                           const IndentationRecord& rec) {
  WedgeCertificate cert;
  auto fail = [&](const std::string& why) {
    cert.valid = false;
    if (cert.violation.empty()) cert.violation = why;
  };
  if (!rec.valid) {
    fail("dent system did not validate");
    return cert;
  }
  const int n = cx.n;
  const int fine = rec.top_level;

  struct Piece {
    int level = 0;
    bool star = false;
    std::vector<CubeRef> cells;
  };
  std::vector<Piece> pieces;
  for (const CubeIndentationReport& d : rec.dents)
    for (const CubeRef& Q : d.spec.cubes())
      pieces.push_back({int(Q.level), false, {Q}});
  for (const StarIndentationReport& s : rec.stars)
    pieces.push_back({s.star_level, true, s.star.cells});

  detail::ClosureCache cc(cx, fine);
  const size_t m = pieces.size();
  std::vector<std::vector<char>> touch(m, std::vector<char>(m, 0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      bool meet = false;
      for (const CubeRef& a : pieces[i].cells)
        for (const CubeRef& b : pieces[j].cells)
          if (!meet && cc.meet(a, b)) meet = true;
      if (meet) {
        touch[i][j] = touch[j][i] = 1;
        ++cert.touching_pairs;
        continue;
      }
      ++cert.disjoint_pairs;
      int finer_level = std::max(pieces[i].level, pieces[j].level);
      int64_t required = pow3(fine - finer_level);
      bool one_chart = true;
      int32_t chart = pieces[i].cells.front().chart;
      for (const CubeRef& a : pieces[i].cells) one_chart &= a.chart == chart;
      for (const CubeRef& b : pieces[j].cells) one_chart &= b.chart == chart;
      if (!one_chart) continue;  // layer counting certifies the bound
      int64_t gap = -1;
      for (const CubeRef& a : pieces[i].cells)
        for (const CubeRef& b : pieces[j].cells) {
          int64_t g = detail::reg_gap_linf(detail::reg_of(a, fine, n),
                                           detail::reg_of(b, fine, n), n);
          gap = gap < 0 ? g : std::min(gap, g);
        }
      int64_t margin = gap - required;
      if (cert.exact_pairs == 0 || margin < cert.worst_margin)
        cert.worst_margin = margin;
      ++cert.exact_pairs;
      if (margin < 0)
        fail("two disjoint dent pieces are closer than the finer side");
    }
  }
  // No point lies in three maximal cubes, across all walls.
  for (size_t i = 0; i < m; ++i) {
    if (pieces[i].star) continue;
    for (size_t j = i + 1; j < m; ++j) {
      if (pieces[j].star || !touch[i][j]) continue;
      std::vector<CubeRef> sij =
          cc.shared(pieces[i].cells.front(), pieces[j].cells.front());
      for (size_t k = j + 1; k < m; ++k) {
        if (pieces[k].star || !touch[i][k] || !touch[j][k]) continue;
        const std::vector<CubeRef>& ck = cc.of(pieces[k].cells.front());
        std::vector<CubeRef> triple;
        std::set_intersection(sij.begin(), sij.end(), ck.begin(), ck.end(),
                              std::back_inserter(triple));
        if (!triple.empty()) fail("three maximal cubes share a point");
      }
    }
  }
  return cert;
}

// Ordered removal plan for a dent system: each round removes every deepest
// maximal cube (in one fixed order), which leaves a valid dent system; the
// star pieces go last.  Replaying the plan restores the dent cube-for-cube.
struct FlatteningRound {
  int level = 0;
  std::vector<CubeRef> cubes;
};

struct FlatteningPlan {
  bool valid = true;
  std::string violation;
  std::vector<FlatteningRound> rounds;
  std::vector<Subcomplex> star_parts;
  size_t round_count() const {
    return rounds.size() + (star_parts.empty() ? 0 : 1);
  }
};

inline FlatteningPlan flattening_schedule(const CubicalComplex& cx,
                                          const Subcomplex& B,
                                          const Subcomplex& ambient_base) {
  FlatteningPlan plan;
  {
    IndentationRecord rec = validate_indentation(cx, B, ambient_base);
    if (!rec.valid)
      throw VerificationError(
          "NotIndentation",
          "flattening needs a valid dent system: " + rec.violation);
  }
  const int n = cx.n;
  Subcomplex cur = B;
  int guard = B.empty() ? 0 : B.level - ambient_base.level + 1;
  while (guard-- > 0 && !cur.empty()) {
    IndentationRecord r = validate_indentation(cx, cur, ambient_base);
    if (!r.valid)
      throw VerificationError(
          "NotIndentation",
          "dent stopped being valid mid-flattening: " + r.violation);
    // Deepest level among the wall-dent cubes; stars wait for the end.
    int deepest = -1;
    for (const CubeIndentationReport& d : r.dents)
      for (const CubeRef& Q : d.spec.cubes())
        deepest = std::max(deepest, int(Q.level));
    if (deepest < 0) break;  // only star pieces remain
    FlatteningRound round;
    round.level = deepest;
    for (const CubeIndentationReport& d : r.dents)
      for (const CubeRef& Q : d.spec.cubes())
        if (Q.level == deepest) round.cubes.push_back(Q);
    std::sort(round.cubes.begin(), round.cubes.end());

    // Every cube removed this round touches at most two same-round cubes.
    detail::ClosureCache cc(cx, deepest);
    for (size_t i = 0; i < round.cubes.size(); ++i) {
      int neighbours = 0;
      for (size_t j = 0; j < round.cubes.size(); ++j)
        if (j != i && cc.meet(round.cubes[i], round.cubes[j])) ++neighbours;
      if (neighbours > 2) {
        plan.valid = false;
        if (plan.violation.empty())
          plan.violation = "a round cube touches three same-round cubes";
      }
    }

    BoxSet removed(n);
    for (const CubeRef& Q : round.cubes) {
      std::vector<Box> w;
      box_refine(box_of(Q, n), cur.level - Q.level, n, w);
      for (const Box& b : w) removed.add(b);
    }
    Subcomplex removed_cells = removed.materialize(cx, BigCount(1) << 24);
    cur = cur.set_minus(removed_cells);
    plan.rounds.push_back(std::move(round));
  }

  // Star round: whatever remains must be exactly the star bodies.
  if (!cur.empty()) {
    IndentationRecord r = validate_indentation(cx, cur, ambient_base);
    if (!r.valid || !r.dents.empty())
      throw VerificationError("NotIndentation",
                              "flattening remainder is not pure star");
    BoxSet acc(n);
    for (const Subcomplex& sb : r.star_bodies) {
      plan.star_parts.push_back(sb);
      for (const CubeRef& c : sb.cells) acc.add(box_of(c, n));
    }
    Subcomplex star_cells = acc.materialize(cx, BigCount(1) << 24);
    if (!star_cells.set_equal(cur)) {
      plan.valid = false;
      if (plan.violation.empty())
        plan.violation = "star parts do not cover the flattening remainder";
    }
  }

  // Reconstruction: the removed rounds plus star parts give back B exactly.
  if (!B.empty()) {
    BoxSet total(n);
    for (const FlatteningRound& round : plan.rounds)
      for (const CubeRef& Q : round.cubes) {
        std::vector<Box> w;
        box_refine(box_of(Q, n), B.level - Q.level, n, w);
        for (const Box& b : w) total.add(b);
      }
    for (const Subcomplex& sp : plan.star_parts)
      for (const CubeRef& c : sp.cells) {
        std::vector<Box> w;
        box_refine(box_of(c, n), B.level - c.level, n, w);
        for (const Box& b : w) total.add(b);
      }
    Subcomplex rebuilt = total.materialize(cx, BigCount(1) << 24);
    if (!rebuilt.set_equal(B)) {
      plan.valid = false;
      if (plan.violation.empty())
        plan.violation = "replaying the plan does not restore the dent";
    }
  }
  return plan;
}

}  // namespace wada
