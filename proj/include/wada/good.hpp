#pragma once
// Structural validation of complexes, star classification, numerical
// constants, collar attachment, and the built-in generators.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "wada/base.hpp"
#include "wada/complex.hpp"
#include "wada/cube.hpp"
#include "wada/graphs.hpp"
#include "wada/subcomplex.hpp"

namespace wada {

// ---------------------------------------------------------------------------
// Star classification at (n-2)-cells.

enum class StarKind { kLinear, kCyclic, kIrregular };

struct StarShape {
  StarKind kind = StarKind::kIrregular;
  int cube_count = 0;
  int spoke_count = 0;  // (n-1)-cells through the (n-2)-cell
};

// Shape of the star of an (n-2)-cell e inside the pure n-complex P.
inline StarShape star_shape(const Subcomplex& P, const CubeRef& e) {
  const CubicalComplex& cx = *P.cx;
  Subcomplex st = P.star_of_cell(e);
  StarShape out;
  out.cube_count = int(st.size());
  if (st.empty()) return out;
  // spokes: (n-1)-faces of star cubes containing e, with incidence counts
  std::vector<std::pair<CubeRef, int32_t>> inc;  // (spoke, cube index)
  std::vector<CubeRef> fs;
  for (size_t i = 0; i < st.cells.size(); ++i) {
    enumerate_faces_of_dim(st.cells[i], cx.n, cx.n - 1, fs);
    for (const CubeRef& f : fs)
      if (contains_canonical(cx, f, e))
        inc.emplace_back(cx.canonical(f), int32_t(i));
  }
  std::sort(inc.begin(), inc.end());
  int one_sided = 0;
  int spokes = 0;
  DisjointSet ds(int32_t(st.size()));
  bool over = false;
  for (size_t i = 0; i < inc.size();) {
    size_t j = i;
    while (j < inc.size() && inc[j].first == inc[i].first) ++j;
    ++spokes;
    size_t sides = j - i;
    if (sides == 1)
      ++one_sided;
    else if (sides == 2)
      ds.unite(inc[i].second, inc[i + 1].second);
    else
      over = true;
    i = j;
  }
  out.spoke_count = spokes;
  if (over) return out;
  int comps = 0;
  for (int32_t v = 0; v < int32_t(st.size()); ++v)
    if (ds.find(v) == v) ++comps;
  if (comps != 1) return out;  // star not connected through spokes
  if (one_sided == 0 && spokes == out.cube_count) {
    out.kind = StarKind::kCyclic;
  } else if (one_sided == 2 && spokes == out.cube_count + 1) {
    out.kind = StarKind::kLinear;
  }
  return out;
}

struct CyclicityReport {
  int64_t linear = 0;
  int64_t cyclic = 0;
  int64_t irregular = 0;
  int mu = 0;  // max spokes over all (n-2)-cells
  std::vector<CubeRef> irregular_examples;
};

inline CyclicityReport star_cyclicity(const Subcomplex& P) {
  CyclicityReport rep;
  Subcomplex codim2 = P.skeleton(P.cx->n - 2);
  for (const CubeRef& e : codim2.cells) {
    StarShape s = star_shape(P, e);
    rep.mu = std::max(rep.mu, s.spoke_count);
    switch (s.kind) {
      case StarKind::kLinear:
        ++rep.linear;
        break;
      case StarKind::kCyclic:
        ++rep.cyclic;
        break;
      case StarKind::kIrregular:
        ++rep.irregular;
        if (rep.irregular_examples.size() < 8)
          rep.irregular_examples.push_back(e);
        break;
    }
  }
  return rep;
}

// Is the star of the (n-2)-cell e the standard one of the unit grid
// (a full cyclic ring of 4 cubes)?
inline bool euclidean_edge_star(const Subcomplex& P, const CubeRef& e) {
  StarShape s = star_shape(P, e);
  return s.kind == StarKind::kCyclic && s.cube_count == 4;
}

// ---------------------------------------------------------------------------
// Goodness.

struct GoodnessReport {
  bool adjacency_connected = false;
  bool faces_two_sided = false;
  bool stars_connected = false;
  bool boundary_nonempty = false;
  bool boundary_components_adjacent = false;
  int32_t boundary_component_count = 0;
  // set by validate_good(P, true): the boundary star is a cube-level product
  bool collar_ok = false;
  std::vector<CubeRef> offenders;

  bool good_interior() const {
    return adjacency_connected && faces_two_sided && stars_connected;
  }
  bool good() const {
    return good_interior() && boundary_nonempty &&
           boundary_components_adjacent;
  }
};

// Components of a pure subcomplex where two cells are joined when they share
// a cell of any dimension ("topological" components).
inline std::vector<int32_t> topological_components(const Subcomplex& P) {
  // incidence through vertices suffices: two closed cells meet iff they
  // share a vertex of the common grid at P.level
  std::vector<std::pair<CubeRef, int32_t>> inc;
  std::vector<CubeRef> fs;
  for (size_t i = 0; i < P.cells.size(); ++i) {
    enumerate_faces_of_dim(P.cells[i], P.cx->n, 0, fs);
    for (const CubeRef& v : fs)
      inc.emplace_back(P.cx->canonical(v), int32_t(i));
  }
  std::sort(inc.begin(), inc.end());
  DisjointSet ds(int32_t(P.cells.size()));
  for (size_t i = 0; i < inc.size();) {
    size_t j = i;
    while (j < inc.size() && inc[j].first == inc[i].first) ++j;
    for (size_t a = i + 1; a < j; ++a) ds.unite(inc[i].second, inc[a].second);
    i = j;
  }
  std::vector<int32_t> comp(P.cells.size());
  std::vector<int32_t> label(P.cells.size(), -1);
  int32_t next = 0;
  for (size_t i = 0; i < P.cells.size(); ++i) {
    int32_t r = ds.find(int32_t(i));
    if (label[size_t(r)] < 0) label[size_t(r)] = next++;
    comp[i] = label[size_t(r)];
  }
  return comp;
}

// Boundary components of a pure n-subcomplex, as adjacency classes of its
// one-sided (n-1)-cells, ordered by least cell.
inline std::vector<Subcomplex> boundary_components(const Subcomplex& P) {
  Subcomplex bd = P.boundary();
  std::vector<Subcomplex> out;
  if (bd.empty()) return out;
  Graph g = build_adjacency(bd);
  std::vector<int32_t> comp = components(g);
  int32_t cnt = component_count(comp);
  out.assign(size_t(cnt), Subcomplex(*P.cx, P.dim - 1, P.level));
  for (size_t i = 0; i < bd.cells.size(); ++i)
    out[size_t(comp[i])].cells.push_back(bd.cells[i]);
  // cells stay sorted within components; components are ordered by first
  // appearance which is the least cell, since vertices are scanned in order
  return out;
}

// St_P(boundary) is a cube-level product over the boundary: every boundary
// cell lies in exactly one cube, the assignment is a bijection onto the star,
// and star cubes share a side face exactly when their boundary cells are
// adjacent.  This is the computable form of "the boundary star is a collar".
inline bool collar_product_ok(const Subcomplex& P) {
  Subcomplex bd = P.boundary();
  if (bd.empty()) return false;
  Subcomplex st = P.star_of(bd);
  if (st.size() != bd.size()) return false;

  // cube of each boundary cell; must be unique per cell and cover the star
  std::vector<CubeRef> tops(st.size());  // boundary cell of star cube i
  std::vector<char> seen(st.size(), 0);
  std::vector<CubeRef> cubes;
  for (const CubeRef& f : bd.cells) {
    P.cells_containing(f, cubes);
    std::vector<CubeRef> in;
    for (const CubeRef& q : cubes)
      if (P.contains(q)) in.push_back(q);
    if (in.size() != 1) return false;
    int32_t i = st.index_of(in[0]);
    if (i < 0 || seen[size_t(i)]) return false;
    seen[size_t(i)] = 1;
    tops[size_t(i)] = f;
  }

  // adjacency of star cubes must mirror adjacency of their boundary cells
  Graph gs = build_adjacency(st);
  Graph gb = build_adjacency(bd);
  auto pairs = [&](const Graph& g, const std::vector<CubeRef>* top) {
    std::vector<std::array<CubeRef, 2>> ps;
    for (const auto& e : g.edges) {
      CubeRef a = top ? (*top)[size_t(e[0])] : bd.cells[size_t(e[0])];
      CubeRef b = top ? (*top)[size_t(e[1])] : bd.cells[size_t(e[1])];
      if (b < a) std::swap(a, b);
      ps.push_back({a, b});
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
  };
  return pairs(gs, &tops) == pairs(gb, nullptr);
}

inline GoodnessReport validate_good(const Subcomplex& P,
                                    bool check_collar = false) {
  const CubicalComplex& cx = *P.cx;
  const int n = cx.n;
  assert(P.dim == n);
  GoodnessReport rep;
  if (check_collar) rep.collar_ok = collar_product_ok(P);

  // (1) adjacency graph connected
  Graph g = build_adjacency(P);
  rep.adjacency_connected = is_connected(g);

  // (2) every (n-1)-cell lies in at most two cells of P, counted with
  // face-slot multiplicity
  rep.faces_two_sided = true;
  {
    std::vector<CubeRef> all, fs;
    for (const CubeRef& q : P.cells) {
      enumerate_faces_of_dim(q, n, n - 1, fs);
      for (const CubeRef& f : fs) all.push_back(cx.canonical(f));
    }
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < all.size();) {
      size_t j = i;
      while (j < all.size() && all[j] == all[i]) ++j;
      if (j - i > 2) {
        rep.faces_two_sided = false;
        if (rep.offenders.size() < 8) rep.offenders.push_back(all[i]);
      }
      i = j;
    }
  }

  // (3) stars of vertices and (n-2)-cells adjacently connected
  rep.stars_connected = true;
  for (int d : {0, n - 2}) {
    if (d == n - 1) break;  // n == 1 has no meaningful case here
    Subcomplex cells = P.skeleton(d);
    for (const CubeRef& c : cells.cells) {
      Subcomplex st = P.star_of_cell(c);
      if (st.size() <= 1) continue;
      if (!is_connected(build_adjacency(st))) {
        rep.stars_connected = false;
        if (rep.offenders.size() < 8) rep.offenders.push_back(c);
      }
    }
    if (d == 0 && n - 2 == 0) break;
  }

  // (4) boundary nonempty; topological components = adjacency components
  Subcomplex bd = P.boundary();
  rep.boundary_nonempty = !bd.empty();
  if (!bd.empty()) {
    Graph bg = build_adjacency(bd);
    int32_t adj = component_count(components(bg));
    int32_t top = component_count(topological_components(bd));
    rep.boundary_component_count = adj;
    rep.boundary_components_adjacent = (adj == top);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Numerical constants.

inline int compute_mu(const Subcomplex& P) {
  const CubicalComplex& cx = *P.cx;
  Subcomplex faces = P.skeleton(cx.n - 1);
  std::vector<std::pair<CubeRef, CubeRef>> inc;  // ((n-2)-cell, (n-1)-cell)
  std::vector<CubeRef> fs;
  for (const CubeRef& f : faces.cells) {
    enumerate_faces_of_dim(f, cx.n, cx.n - 2, fs);
    for (const CubeRef& e : fs) inc.emplace_back(cx.canonical(e), f);
  }
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  int mu = 0;
  for (size_t i = 0; i < inc.size();) {
    size_t j = i;
    while (j < inc.size() && inc[j].first == inc[i].first) ++j;
    mu = std::max(mu, int(j - i));
    i = j;
  }
  return mu;
}

inline int compute_theta(const Subcomplex& P) {
  const CubicalComplex& cx = *P.cx;
  std::vector<CubeRef> all, fs;
  for (const CubeRef& q : P.cells) {
    enumerate_faces_of_dim(q, cx.n, 0, fs);
    for (const CubeRef& v : fs) all.push_back(cx.canonical(v));
  }
  std::sort(all.begin(), all.end());
  int theta = 0;
  for (size_t i = 0; i < all.size();) {
    size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    theta = std::max(theta, int(j - i));
    i = j;
  }
  return theta;
}

// Exact count bound for the refined star of one n-cube: max over Q of
// #n-cubes + #(n-1)-cubes of Ref^nu(St_P(Q)).
inline int64_t compute_lambda_loc(const Subcomplex& P, int nu) {
  const CubicalComplex& cx = *P.cx;
  const int n = cx.n;
  __int128 c3n = ipow(3, nu * n);
  __int128 c3n1 = ipow(3, nu * (n - 1));
  __int128 c3 = ipow(3, nu);
  __int128 best = 0;
  std::vector<CubeRef> fs;
  for (const CubeRef& q : P.cells) {
    Subcomplex one(*P.cx, P.dim, P.level);
    one.cells.push_back(q);
    Subcomplex N = P.star_of(one);
    __int128 c = __int128(N.size());
    // internal (n-1)-cells of N
    std::vector<CubeRef> all;
    for (const CubeRef& Q : N.cells) {
      enumerate_faces_of_dim(Q, n, n - 1, fs);
      for (const CubeRef& f : fs) all.push_back(cx.canonical(f));
    }
    std::sort(all.begin(), all.end());
    __int128 internal = 0;
    for (size_t i = 0; i < all.size();) {
      size_t j = i;
      while (j < all.size() && all[j] == all[i]) ++j;
      if (j - i == 2) ++internal;
      i = j;
    }
    __int128 cubes = c * c3n;
    __int128 faces = c * __int128(n) * c3n1 * (c3 + 1) - internal * c3n1;
    best = std::max(best, cubes + faces);
  }
  if (best > __int128(INT64_MAX))
    throw ConstructionError("Overflow",
                            "local size bound exceeds 64-bit range at nu=" +
                                std::to_string(nu));
  return int64_t(best);
}

struct Constants {
  int n = 0;
  int m = 0;       // number of boundary components the caller works with
  int mu = 0;      // max (n-1)-cells through an (n-2)-cell
  int theta = 0;   // max n-cubes through a vertex
  int nu_paper = 0;
  int nu_feasible = 0;
  int nu_used = 0;          // the nu at which lambda_loc was evaluated
  int64_t lambda_loc = 0;
};

inline int compute_nu_paper(int m, int mu) {
  int64_t target = pow3(10) * int64_t(m) * int64_t(mu) * int64_t(mu);
  int nu = 1;
  while (pow3(nu) < target) ++nu;
  return nu;
}

inline int compute_nu_feasible(int m, int mu) {
  for (int nu = 2; nu <= 40; ++nu) {
    bool a = 2 * int64_t(mu) * int64_t(mu) * int64_t(m) - 1 <= pow3(nu - 2);
    bool b = 18 * int64_t(m - 1) < pow3(nu);
    if (a && b) return nu;
  }
  throw ConstructionError("Overflow", "no feasible refinement exponent");
}

inline Constants compute_constants(const Subcomplex& P, int m,
                                   int nu_override = -1) {
  Constants c;
  c.n = P.cx->n;
  c.m = m;
  c.mu = compute_mu(P);
  c.theta = compute_theta(P);
  c.nu_paper = compute_nu_paper(m, c.mu);
  c.nu_feasible = compute_nu_feasible(m, c.mu);
  c.nu_used = nu_override > 0 ? nu_override : c.nu_feasible;
  c.lambda_loc = compute_lambda_loc(P, c.nu_used);
  return c;
}

// ---------------------------------------------------------------------------
// Grid complexes and collar attachment.

// A complex whose charts are the given unit cells of the integer grid, with
// identity gluings between face-neighbors.  Cells are sorted; the chart id of
// a cell is its index in the sorted order.
inline CubicalComplex grid_complex(
    int n, std::vector<std::array<int32_t, MAXN>> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  CubicalComplex cx;
  cx.n = n;
  cx.num_charts = int32_t(cells.size());
  auto idx_of = [&](const std::array<int32_t, MAXN>& c) -> int32_t {
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || *it != c) return -1;
    return int32_t(it - cells.begin());
  };
  for (int32_t i = 0; i < int32_t(cells.size()); ++i) {
    for (int a = 0; a < n; ++a) {
      std::array<int32_t, MAXN> nb = cells[size_t(i)];
      ++nb[size_t(a)];
      int32_t j = idx_of(nb);
      if (j < 0) continue;
      Gluing g;
      g.chart_a = i;
      g.face_a = 2 * a + 1;
      g.chart_b = j;
      g.face_b = 2 * a;
      for (int k = 0; k < n; ++k) g.perm[size_t(k)] = int8_t(k + 1);
      g.perm[size_t(a)] = int8_t(-(a + 1));
      cx.gluings.push_back(g);
    }
  }
  cx.finalize();
  return cx;
}

struct Collared {
  CubicalComplex cx;
  int32_t first_collar_chart = 0;
  // base_cells[i]: the boundary cell of the inner complex carried by collar
  // chart first_collar_chart + i, in inner-chart coordinates.
  std::vector<CubeRef> base_cells;
};

// Attach the product collar along the boundary of T: one new chart per
// boundary (n-1)-cell, glued bottom-to-boundary, with collar charts glued
// side-to-side across each (n-2)-cell shared by exactly two boundary cells.
inline Collared collar_attach(const CubicalComplex& T) {
  const int n = T.n;
  Subcomplex TK = Subcomplex::whole(T);
  Subcomplex bd = TK.boundary();
  if (bd.empty())
    throw ConstructionError("NoBoundary",
                            "collar attachment needs a nonempty boundary");

  Collared out;
  out.cx.n = n;
  out.cx.num_charts = T.num_charts + int32_t(bd.size());
  out.cx.gluings = T.gluings;
  out.first_collar_chart = T.num_charts;
  out.base_cells = bd.cells;

  auto collar_of = [&](size_t bidx) {
    return T.num_charts + int32_t(bidx);
  };
  // frame of a boundary cell: its interval axes ascending
  auto frame_of = [&](const CubeRef& f) {
    std::array<int, MAXN> fr{-1, -1, -1, -1};
    int k = 0;
    for (int a = 0; a < n; ++a)
      if (!f.point_axis(a)) fr[size_t(k++)] = a;
    return fr;
  };
  auto frame_idx = [&](const std::array<int, MAXN>& fr, int axis) {
    for (int i = 0; i < n - 1; ++i)
      if (fr[size_t(i)] == axis) return i;
    return -1;
  };

  // bottom gluings
  for (size_t b = 0; b < bd.cells.size(); ++b) {
    const CubeRef& f = bd.cells[b];
    int p = -1, s = -1;
    for (int a = 0; a < n; ++a)
      if (f.point_axis(a)) {
        p = a;
        s = int(f.origin[size_t(a)]);
      }
    assert(p >= 0 && (s == 0 || s == 1));
    std::array<int, MAXN> fr = frame_of(f);
    Gluing g;
    g.chart_a = f.chart;
    g.face_a = 2 * p + s;
    g.chart_b = collar_of(b);
    g.face_b = 2 * (n - 1) + 0;
    for (int i = 0; i < n - 1; ++i)
      g.perm[size_t(fr[size_t(i)])] = int8_t(i + 1);
    g.perm[size_t(p)] = int8_t(s == 0 ? n : -n);
    out.cx.gluings.push_back(g);
  }

  // side gluings across boundary (n-2)-cells
  struct Inc {
    CubeRef e_canon;
    int32_t f_idx;
    CubeRef e_local;  // representation in chart of bd.cells[f_idx]
  };
  std::vector<Inc> incs;
  std::vector<CubeRef> fs;
  for (size_t b = 0; b < bd.cells.size(); ++b) {
    enumerate_faces_of_dim(bd.cells[b], n, n - 2, fs);
    for (const CubeRef& e : fs)
      incs.push_back({T.canonical(e), int32_t(b), e});
  }
  std::sort(incs.begin(), incs.end(), [](const Inc& x, const Inc& y) {
    if (x.e_canon != y.e_canon) return x.e_canon < y.e_canon;
    return x.f_idx < y.f_idx;
  });
  for (size_t i = 0; i < incs.size();) {
    size_t j = i;
    while (j < incs.size() && incs[j].e_canon == incs[i].e_canon) ++j;
    if (j - i == 2 && incs[i].f_idx != incs[i + 1].f_idx) {
      const Inc& A = incs[i];
      const Inc& B = incs[i + 1];
      const CubeRef& f1 = bd.cells[size_t(A.f_idx)];
      const CubeRef& f2 = bd.cells[size_t(B.f_idx)];
      // the axis of f1 demoted in e, and its side
      int q1 = -1, t1 = -1;
      for (int a = 0; a < n; ++a)
        if (A.e_local.point_axis(a) && !f1.point_axis(a)) {
          q1 = a;
          t1 = int(A.e_local.origin[size_t(a)]);
        }
      int q2 = -1, t2 = -1;
      for (int a = 0; a < n; ++a)
        if (B.e_local.point_axis(a) && !f2.point_axis(a)) {
          q2 = a;
          t2 = int(B.e_local.origin[size_t(a)]);
        }
      assert(q1 >= 0 && q2 >= 0);
      // signed axis map sigma with sigma(A.e_local) == B.e_local
      std::vector<CubeRef> reps;
      std::vector<std::array<int8_t, MAXN>> maps;
      T.orbit_maps(A.e_local, reps, maps);
      std::array<int8_t, MAXN> sigma{0, 0, 0, 0};
      bool found = false;
      for (size_t r = 0; r < reps.size(); ++r)
        if (reps[r] == B.e_local) {
          sigma = maps[r];
          found = true;
          break;
        }
      if (!found) {
        i = j;
        continue;  // representations not related by gluings: skip
      }
      std::array<int, MAXN> fr1 = frame_of(f1);
      std::array<int, MAXN> fr2 = frame_of(f2);
      Gluing g;
      g.chart_a = collar_of(size_t(A.f_idx));
      g.face_a = 2 * frame_idx(fr1, q1) + t1;
      g.chart_b = collar_of(size_t(B.f_idx));
      g.face_b = 2 * frame_idx(fr2, q2) + t2;
      g.perm[size_t(n - 1)] = int8_t(n);  // radial to radial
      g.perm[size_t(frame_idx(fr1, q1))] =
          int8_t(t1 == t2 ? (frame_idx(fr2, q2) + 1)
                          : -(frame_idx(fr2, q2) + 1));
      for (int ii = 0; ii < n - 1; ++ii) {
        int c = fr1[size_t(ii)];
        if (c == q1) continue;
        int cc = std::abs(sigma[size_t(c)]) - 1;
        bool flip = sigma[size_t(c)] < 0;
        int target = frame_idx(fr2, cc);
        assert(target >= 0);
        g.perm[size_t(ii)] = int8_t(flip ? -(target + 1) : (target + 1));
      }
      out.cx.gluings.push_back(g);
    }
    i = j;
  }
  out.cx.finalize();
  return out;
}

// ---------------------------------------------------------------------------
// Generators.

// The boundary of the (n+1)-cube as a closed n-complex: 2(n+1) charts.
// Chart of ambient face (a, s) has id 2a+s; its frame is the ambient axes
// other than a, ascending.
inline CubicalComplex generate_closed(int n) {
  if (n + 1 > MAXN)
    throw ConstructionError("UnsupportedDimension",
                            "closed generator needs n+1 <= " +
                                std::to_string(MAXN));
  CubicalComplex cx;
  cx.n = n;
  cx.num_charts = 2 * (n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          Gluing g;
          g.chart_a = 2 * a + s;
          g.chart_b = 2 * b + t;
          g.face_a = 2 * (b - 1) + t;
          g.face_b = 2 * a + s;
          for (int i = 0; i < n; ++i) {
            int c = (i < a) ? i : i + 1;  // ambient axis of frame axis i
            if (c == b) {
              g.perm[size_t(i)] = int8_t(t == s ? (a + 1) : -(a + 1));
            } else {
              int tgt = (c < b) ? c : c - 1;
              g.perm[size_t(i)] = int8_t(tgt + 1);
            }
          }
          cx.gluings.push_back(g);
        }
  cx.finalize();
  return cx;
}

// Product of the closed surface-of-a-cube 2-complex with a stack of unit
// intervals: 6*layers charts, chart id = layer*6 + surface chart.  The two
// boundary components are the layer-0 bottoms and the top faces of the last
// layer.
inline CubicalComplex generate_shell(int layers) {
  if (layers < 1)
    throw ConstructionError("TooSmall", "shell needs at least one layer");
  CubicalComplex surf = generate_closed(2);
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = int32_t(6 * layers);
  for (int t = 0; t < layers; ++t) {
    for (const Gluing& sg : surf.gluings) {
      Gluing g;
      g.chart_a = int32_t(t * 6) + sg.chart_a;
      g.chart_b = int32_t(t * 6) + sg.chart_b;
      g.face_a = sg.face_a;
      g.face_b = sg.face_b;
      g.perm = sg.perm;
      g.perm[2] = 3;  // radial axis carried identically
      cx.gluings.push_back(g);
    }
    if (t + 1 < layers)
      for (int c = 0; c < 6; ++c) {
        Gluing g;
        g.chart_a = int32_t(t * 6 + c);
        g.face_a = 2 * 2 + 1;
        g.chart_b = int32_t((t + 1) * 6 + c);
        g.face_b = 2 * 2 + 0;
        g.perm = {1, 2, -3, 4};
        cx.gluings.push_back(g);
      }
  }
  cx.finalize();
  return cx;
}

// Refined solid cube with (m-1) removed interior cubes, collared.  The holes
// are chosen lexicographically first among positions whose stars avoid the
// boundary and each other.
// Core of the holed-cube fixture: the 3^r grid minus m-1 interior unit
// holes, before the collar.  Every hole edge here lies in 4 squares; the
// collar seam raises that to 5 on the collared complex.
inline CubicalComplex generate_holed_grid(int n, int m, int r) {
  if (m < 1) throw ConstructionError("TooSmall", "need at least one region");
  int64_t side64 = pow3(r);
  if (side64 > 1000000)
    throw ConstructionError("Overflow", "refinement too deep for a grid");
  int32_t side = int32_t(side64);

  // choose hole positions: coordinates in [2, side-3], stars pairwise
  // disjoint (some axis gap >= 4), lexicographically greedy
  std::vector<std::array<int32_t, MAXN>> holes;
  if (m - 1 > 0) {
    if (side - 3 < 2)
      throw ConstructionError("TooSmall",
                              "no interior positions clear of the boundary");
    std::array<int32_t, MAXN> cur{};
    for (int i = 0; i < MAXN; ++i) cur[size_t(i)] = (i < n) ? 2 : 0;
    auto star_disjoint = [&](const std::array<int32_t, MAXN>& a,
                             const std::array<int32_t, MAXN>& b) {
      for (int i = 0; i < n; ++i)
        if (std::abs(a[size_t(i)] - b[size_t(i)]) >= 4) return true;
      return false;
    };
    while (int(holes.size()) < m - 1) {
      bool ok = true;
      for (const auto& h : holes)
        if (!star_disjoint(cur, h)) ok = false;
      if (ok) holes.push_back(cur);
      // lexicographic increment within [2, side-3]^n
      int a = n - 1;
      while (a >= 0) {
        if (cur[size_t(a)] < side - 3) {
          ++cur[size_t(a)];
          break;
        }
        cur[size_t(a)] = 2;
        --a;
      }
      if (a < 0 && int(holes.size()) < m - 1)
        throw ConstructionError("TooSmall",
                                "cannot place " + std::to_string(m - 1) +
                                    " star-disjoint interior holes at r=" +
                                    std::to_string(r));
    }
  }

  std::vector<std::array<int32_t, MAXN>> cells;
  std::array<int32_t, MAXN> c{};
  std::vector<int32_t> idx(size_t(n), 0);
  // iterate the full grid
  int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  for (int64_t lin = 0; lin < total; ++lin) {
    int64_t rem = lin;
    for (int i = n - 1; i >= 0; --i) {
      c[size_t(i)] = int32_t(rem % side);
      rem /= side;
    }
    for (int i = n; i < MAXN; ++i) c[size_t(i)] = 0;
    bool hole = false;
    for (const auto& h : holes)
      if (h == c) hole = true;
    if (!hole) cells.push_back(c);
  }
  return grid_complex(n, std::move(cells));
}

inline Collared generate_holed_cube(int n, int m, int r) {
  return collar_attach(generate_holed_grid(n, m, r));
}

}  // namespace wada
