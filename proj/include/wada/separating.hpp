#pragma once
// Separating complexes: codim-1 subcomplexes whose complement falls into one
// piece per boundary component, each piece unwinding to a product over its
// boundary.  Provides validation, the initial one-refinement construction,
// and the component / lift / core decomposition.

#include <map>

#include <wada/good.hpp>

namespace wada {

// The level+1 descendant occupying the middle third on every interval axis.
inline CubeRef center_child(const CubicalComplex& cx, const CubeRef& q) {
  assert(q.level + 1 <= MAXLEVEL);
  CubeRef c = q;
  c.level = int8_t(q.level + 1);
  for (int a = 0; a < cx.n; ++a)
    c.origin[size_t(a)] =
        q.point_axis(a) ? q.origin[size_t(a)] * 3 : q.origin[size_t(a)] * 3 + 1;
  return cx.canonical(c);
}

// One tunnel of a lift: a tree realization, possibly uniformly refined,
// attached through one gate cell (refined to a full bundle at depth > 0).
struct TunnelPart {
  Subcomplex cubes;                // n-cubes carried by the tree
  std::vector<CubeRef> tree_keys;  // surviving keys inside the tunnel
  std::vector<CubeRef> gates;      // surviving cells joining it to the star part
  int depth = -1;                  // collapse depth; 0 is a plain tree, -1 fails
};

namespace detail {

struct LocalEdge {
  int32_t u, v;  // indices into the cube list
  CubeRef key;
  bool alive;
};

// Certify a cube set with its surviving/cut interior edges as a uniformly
// refined tree realization.  Collapses one refinement level at a time: child
// cubes must tile whole parents, every interior wall of a parent must
// survive, and the 3^(n-1) child edges of a parent face must be uniformly
// surviving or uniformly cut.  Returns the number of levels collapsed until
// the surviving edges form a spanning tree, or -1.
inline int certify_refined_tree(const CubicalComplex& cx,
                                std::vector<CubeRef> cubes,
                                std::vector<LocalEdge> edges) {
  const int n = cx.n;
  for (int depth = 0;; ++depth) {
    DisjointSet ds(int32_t(cubes.size()));
    int64_t alive_cnt = 0;
    bool acyclic = true;
    for (const auto& e : edges)
      if (e.alive) {
        ++alive_cnt;
        if (!ds.unite(e.u, e.v)) acyclic = false;
      }
    if (acyclic && alive_cnt + 1 == int64_t(cubes.size())) {
      bool connected = true;
      for (size_t i = 1; i < cubes.size(); ++i)
        if (ds.find(int32_t(i)) != ds.find(0)) {
          connected = false;
          break;
        }
      if (connected) return depth;
    }
    if (cubes.empty() || cubes.front().level == 0) return -1;

    // group the cubes by parent; every parent must be fully tiled
    std::map<CubeRef, int32_t> pidx;
    std::vector<CubeRef> parents;
    std::vector<int32_t> parent_of(cubes.size());
    for (size_t i = 0; i < cubes.size(); ++i) {
      CubeRef p;
      if (!try_parent(cubes[i], n, p)) return -1;
      p = cx.canonical(p);
      auto it = pidx.find(p);
      if (it == pidx.end()) {
        pidx.emplace(p, int32_t(parents.size()));
        parents.push_back(p);
      }
      parent_of[i] = pidx[p];
    }
    std::vector<int64_t> cnt(parents.size(), 0);
    for (int32_t p : parent_of) ++cnt[size_t(p)];
    for (int64_t c : cnt)
      if (c != pow3(n)) return -1;

    // bundle the edges by parent key
    struct Bundle {
      int32_t pu = -1, pv = -1;
      int64_t alive = 0, total = 0;
    };
    std::map<CubeRef, Bundle> bundles;
    for (const auto& e : edges) {
      int32_t pu = parent_of[size_t(e.u)], pv = parent_of[size_t(e.v)];
      CubeRef kp;
      if (!try_parent(e.key, n, kp)) {
        // interior wall of a single parent: must join its own children and
        // must survive
        if (pu != pv || !e.alive) return -1;
        continue;
      }
      if (pu == pv) return -1;
      if (pv < pu) std::swap(pu, pv);
      kp = cx.canonical(kp);
      Bundle& b = bundles[kp];
      if (b.total == 0) {
        b.pu = pu;
        b.pv = pv;
      } else if (b.pu != pu || b.pv != pv) {
        return -1;
      }
      ++b.total;
      if (e.alive) ++b.alive;
    }
    std::vector<LocalEdge> up;
    for (const auto& [kp, b] : bundles) {
      if (b.total != pow3(n - 1)) return -1;
      if (b.alive != 0 && b.alive != b.total) return -1;
      up.push_back({b.pu, b.pv, kp, b.alive != 0});
    }
    cubes = std::move(parents);
    edges = std::move(up);
  }
}

// Fold a cell up through `depth` refinement levels; false if misaligned.
inline bool fold_cell(const CubicalComplex& cx, CubeRef q, int depth,
                      CubeRef& out) {
  for (int t = 0; t < depth; ++t) {
    CubeRef p;
    if (!try_parent(q, cx.n, p)) return false;
    q = p;
  }
  out = cx.canonical(q);
  return true;
}

}  // namespace detail

// Structural description of one lift: the refined boundary star, identified
// cube for cube, plus tree-realization tunnels hanging off single gates.
// This is the only form in which the product property is ever certified.
struct StructureCertificate {
  Subcomplex star_part;
  std::vector<TunnelPart> tunnels;
  bool star_matches = false;      // star part equals the refined boundary star
  bool star_uncut = false;        // no cut cell between two star-part cubes
  bool tunnels_certified = false; // every tunnel collapses to a spanning tree
  bool gates_certified = false;   // each gate bundle folds onto a single cell
  bool verified() const {
    return star_matches && star_uncut && tunnels_certified && gates_certified;
  }
};

struct SigmaReport {
  Subcomplex sigma;  // the boundary piece, refined to the level of Z
  Subcomplex comp;   // n-cubes of its cut component
  bool boundary_match = false;  // comp meets the boundary exactly in sigma
  StructureCertificate lift;
  bool lift_verified = false;
};

struct SeparatingCertificate {
  bool no_boundary_contact = false;
  bool z_connected = false;
  bool coverage = false;          // the components exhaust the complex
  int32_t component_count = 0;
  std::vector<SigmaReport> per_sigma;

  bool boundary_ok() const {
    for (const auto& s : per_sigma)
      if (!s.boundary_match) return false;
    return !per_sigma.empty();
  }
  bool lifts_verified() const {
    for (const auto& s : per_sigma)
      if (!s.lift_verified) return false;
    return !per_sigma.empty();
  }
  bool conditions123() const {
    return no_boundary_contact && z_connected && boundary_ok() && coverage;
  }
  bool separating() const { return conditions123() && lifts_verified(); }
};

// Validate Z (codim 1, at base.level + j) against the four conditions.  The
// product condition is never decided topologically: it is accepted exactly
// when the component decomposes into the refined boundary star plus tree
// tunnels on single gates, and reported unverified otherwise.
inline SeparatingCertificate validate_separating(const Subcomplex& base,
                                                 const Subcomplex& Z) {
  const CubicalComplex& cx = *base.cx;
  const int n = cx.n;
  assert(base.dim == n && Z.dim == n - 1);
  const int j = Z.level - base.level;
  assert(j >= 0);

  SeparatingCertificate cert;
  Subcomplex P = (j == 0) ? base : base.refine(j);

  // (1) no contact with the star of the boundary
  Subcomplex bdP = P.boundary();
  Subcomplex stBd = P.star_of(bdP);
  cert.no_boundary_contact = true;
  for (const CubeRef& z : Z.cells)
    if (stBd.span_contains(z)) {
      cert.no_boundary_contact = false;
      break;
    }

  // (2) adjacently connected; the empty complex does not count as connected
  cert.z_connected = !Z.empty() && is_connected(build_adjacency(Z));

  // (3) per-boundary-piece components, exhausting the complex
  Graph g = build_adjacency(P);
  std::vector<char> alive = cut_filter(g, Z);
  std::vector<int32_t> label = components(g, alive);
  cert.component_count = component_count(label);

  std::vector<Subcomplex> sig0 = boundary_components(base);
  std::vector<int32_t> used_labels;
  std::vector<CubeRef> cand;
  for (size_t i = 0; i < sig0.size(); ++i) {
    SigmaReport rep{Subcomplex(cx, n - 1, Z.level), Subcomplex(cx, n, Z.level),
                    false, {}, false};
    rep.sigma = (j == 0) ? sig0[i] : sig0[i].refine(j);

    // the component owning this boundary piece
    P.cells_containing(rep.sigma.cells.front(), cand);
    int32_t lbl = -1;
    for (const CubeRef& q : cand) {
      int32_t vi = P.index_of(q);
      if (vi >= 0) lbl = label[size_t(vi)];
    }
    assert(lbl >= 0);
    used_labels.push_back(lbl);
    for (size_t v = 0; v < P.cells.size(); ++v)
      if (label[v] == lbl) rep.comp.cells.push_back(P.cells[v]);
    rep.comp.normalize();

    // the component meets the boundary exactly in its own piece
    rep.boundary_match = true;
    for (const CubeRef& f : bdP.cells)
      if (rep.comp.span_contains(f) != rep.sigma.contains(f)) {
        rep.boundary_match = false;
        break;
      }

    // structural certificate: refined star plus tree tunnels
    Subcomplex st0 = base.star_of(sig0[i]);
    Subcomplex stRef = (j == 0) ? st0 : st0.refine(j);
    Subcomplex star_in = rep.comp.set_intersect(stRef);
    Subcomplex rest = rep.comp.set_minus(stRef);
    StructureCertificate& sc = rep.lift;
    sc.star_part = star_in;
    sc.star_matches = star_in.set_equal(stRef);

    // classify the vertices of the cut graph relative to this component
    std::vector<int8_t> side(P.cells.size(), 0);  // 1 star part, 2 rest
    for (const CubeRef& q : star_in.cells) side[size_t(P.index_of(q))] = 1;
    for (const CubeRef& q : rest.cells) side[size_t(P.index_of(q))] = 2;

    sc.star_uncut = true;
    for (size_t e = 0; e < g.edges.size(); ++e) {
      if (alive[e]) continue;
      if (side[size_t(g.edges[e][0])] == 1 && side[size_t(g.edges[e][1])] == 1)
        sc.star_uncut = false;
    }

    // tunnels: components of the rest under surviving edges
    DisjointSet ds(int32_t(P.cells.size()));
    for (size_t e = 0; e < g.edges.size(); ++e)
      if (alive[e] && side[size_t(g.edges[e][0])] == 2 &&
          side[size_t(g.edges[e][1])] == 2)
        ds.unite(g.edges[e][0], g.edges[e][1]);
    std::map<int32_t, size_t> tunnel_of;
    for (const CubeRef& q : rest.cells) {
      int32_t root = ds.find(P.index_of(q));
      if (!tunnel_of.count(root)) {
        tunnel_of[root] = sc.tunnels.size();
        sc.tunnels.push_back({Subcomplex(cx, n, Z.level), {}, {}});
      }
      sc.tunnels[tunnel_of[root]].cubes.cells.push_back(q);
    }
    for (auto& t : sc.tunnels) t.cubes.normalize();

    // per-tunnel edge lists keep the cut cells between cubes of the same
    // tunnel: a refined tunnel is recognized by its cut bundles
    std::vector<std::vector<detail::LocalEdge>> tedges(sc.tunnels.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
      int8_t a = side[size_t(g.edges[e][0])], b = side[size_t(g.edges[e][1])];
      if (a == 2 && b == 2) {
        size_t tu = tunnel_of[ds.find(g.edges[e][0])];
        size_t tv = tunnel_of[ds.find(g.edges[e][1])];
        if (tu != tv) continue;  // cut cell between two distinct tunnels
        TunnelPart& t = sc.tunnels[tu];
        detail::LocalEdge le{t.cubes.index_of(P.cells[size_t(g.edges[e][0])]),
                             t.cubes.index_of(P.cells[size_t(g.edges[e][1])]),
                             g.edge_keys[e], alive[e] != 0};
        tedges[tu].push_back(le);
        if (le.alive) t.tree_keys.push_back(le.key);
      } else if (alive[e] && a + b == 3) {
        int32_t restv = (a == 2) ? g.edges[e][0] : g.edges[e][1];
        size_t t = tunnel_of[ds.find(restv)];
        sc.tunnels[t].gates.push_back(g.edge_keys[e]);
      }
    }
    sc.tunnels_certified = true;
    sc.gates_certified = true;
    for (size_t ti = 0; ti < sc.tunnels.size(); ++ti) {
      TunnelPart& t = sc.tunnels[ti];
      std::sort(t.tree_keys.begin(), t.tree_keys.end());
      std::sort(t.gates.begin(), t.gates.end());
      t.depth = detail::certify_refined_tree(cx, t.cubes.cells, tedges[ti]);
      if (t.depth < 0) sc.tunnels_certified = false;

      // the gate bundle folds onto one cell at the tunnel's coarse scale
      bool ok = t.depth >= 0;
      if (ok) {
        int64_t want = 1;
        for (int s = 0; s < t.depth; ++s) want *= pow3(n - 1);
        ok = int64_t(t.gates.size()) == want;
      }
      if (ok) {
        CubeRef g0;
        ok = detail::fold_cell(cx, t.gates.front(), t.depth, g0);
        for (size_t k = 1; ok && k < t.gates.size(); ++k) {
          CubeRef gk;
          ok = detail::fold_cell(cx, t.gates[k], t.depth, gk) && gk == g0;
        }
      }
      if (!ok) sc.gates_certified = false;
    }
    rep.lift_verified = sc.verified();
    cert.per_sigma.push_back(std::move(rep));
  }

  // coverage: every cube's label belongs to some boundary piece
  std::sort(used_labels.begin(), used_labels.end());
  used_labels.erase(std::unique(used_labels.begin(), used_labels.end()),
                    used_labels.end());
  cert.coverage = !cert.per_sigma.empty();
  for (size_t v = 0; v < P.cells.size(); ++v)
    if (!std::binary_search(used_labels.begin(), used_labels.end(), label[v])) {
      cert.coverage = false;
      break;
    }
  return cert;
}

// Result of the initial construction, one refinement below the base.
struct InitialSeparating {
  Subcomplex Z;
  SeparatingCertificate cert;
  // construction pieces, kept for verification
  Subcomplex inner_cubes;               // base minus all boundary stars
  std::vector<CubeRef> coarse_tree_keys;  // spanning-tree faces of the inner part
  Subcomplex center_cells;              // their middle-third descendants
  Subcomplex reserved_walls;            // refined skeleton minus those centers
  std::vector<CubeRef> fine_tree_keys;  // keys of the refined spanning tree
  CubeRef gate_face{};                  // base-level face into the chosen star
  CubeRef gate_cell{};                  // its middle-third descendant
  int32_t sigma_prime = 0;
};

// Build the initial separating complex one refinement down: cut the refined
// inner part along everything except a spanning tree threaded through all
// cube centers, and reopen a single gate into the chosen boundary star.
inline InitialSeparating construct_initial(const Subcomplex& base,
                                           int32_t sigma_prime = 0,
                                           bool require_collar = true) {
  const CubicalComplex& cx = *base.cx;
  const int n = cx.n;
  assert(base.dim == n);

  GoodnessReport g0 = validate_good(base, true);
  if (!g0.good())
    throw VerificationError("NotGood", "base complex fails a goodness condition");
  if (require_collar && !g0.collar_ok)
    throw VerificationError("NoCollar",
                            "boundary star is not a cube-level product");

  std::vector<Subcomplex> sig0 = boundary_components(base);
  if (sigma_prime < 0 || size_t(sigma_prime) >= sig0.size())
    throw ConstructionError("BadIndex", "no such boundary component");

  InitialSeparating out{Subcomplex(cx, n - 1, base.level + 1),
                        {},
                        Subcomplex(cx, n, base.level),
                        {},
                        Subcomplex(cx, n - 1, base.level + 1),
                        Subcomplex(cx, n - 1, base.level + 1),
                        {},
                        {},
                        {},
                        sigma_prime};

  // the inner part: base minus all boundary stars
  std::vector<Subcomplex> stars;
  for (const Subcomplex& s : sig0) stars.push_back(base.star_of(s));
  for (size_t i = 0; i < stars.size(); ++i)
    for (size_t k = i + 1; k < stars.size(); ++k)
      if (!stars[i].disjoint_from(stars[k]))
        throw VerificationError("StarsOverlap",
                                "boundary stars are not mutually disjoint");
  Subcomplex inner = base;
  for (const Subcomplex& s : stars) inner = inner.set_minus(s);
  if (inner.empty())
    throw ConstructionError("TooSmall",
                            "no cubes remain away from the boundary stars");

  // coarse spanning tree of the inner part
  Graph gi = build_adjacency(inner);
  if (!is_connected(gi))
    throw VerificationError("Disconnected",
                            "inner part is not adjacently connected");
  std::vector<int32_t> tree = spanning_forest(gi);
  for (int32_t e : tree) out.coarse_tree_keys.push_back(gi.edge_keys[size_t(e)]);
  for (const CubeRef& q : out.coarse_tree_keys)
    out.center_cells.cells.push_back(center_child(cx, q));
  out.center_cells.normalize();

  // walls no refined tree edge may cross: the refined skeleton except the
  // centers of the coarse tree faces
  Subcomplex skel = inner.skeleton(n - 1);
  out.reserved_walls = skel.refine(1).set_minus(out.center_cells);

  // refined spanning tree through every cube center
  Subcomplex fine = inner.refine(1);
  Graph gf = build_adjacency(fine);
  std::vector<char> alive = cut_filter(gf, out.reserved_walls);
  std::map<CubeRef, int32_t> eid_by_key;
  for (size_t e = 0; e < gf.edge_keys.size(); ++e) {
    auto ins = eid_by_key.emplace(gf.edge_keys[e], int32_t(e));
    if (!ins.second)
      throw VerificationError("DuplicateKey",
                              "two refined edges share a key cell");
  }
  std::vector<int32_t> forced;
  std::vector<CubeRef> fs;
  for (const CubeRef& Q : inner.cells) {
    CubeRef c = center_child(cx, Q);
    enumerate_faces_of_dim(c, n, n - 1, fs);
    for (const CubeRef& f : fs) {
      auto it = eid_by_key.find(cx.canonical(f));
      if (it == eid_by_key.end())
        throw VerificationError("MissingEdge",
                                "center cube face keys no refined edge");
      forced.push_back(it->second);
    }
  }
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  std::vector<int32_t> tau = spanning_forest_seeded(gf, forced, alive);
  if (tau.size() + 1 != fine.size())
    throw VerificationError("Disconnected", "refined tree does not span");
  for (int32_t e : tau) out.fine_tree_keys.push_back(gf.edge_keys[size_t(e)]);
  std::sort(out.fine_tree_keys.begin(), out.fine_tree_keys.end());

  // the gate: least inner cube with a face in the chosen boundary star
  const Subcomplex& stp = stars[size_t(sigma_prime)];
  bool found = false;
  for (const CubeRef& Q : inner.cells) {
    enumerate_faces_of_dim(Q, n, n - 1, fs);
    for (const CubeRef& f : fs) {
      CubeRef cf = cx.canonical(f);
      if (stp.span_contains(cf)) {
        out.gate_face = cf;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found)
    throw VerificationError("NoGate",
                            "no inner cube touches the chosen boundary star");
  out.gate_cell = center_child(cx, out.gate_face);

  // cut everything else
  Subcomplex walls = fine.skeleton(n - 1);
  Subcomplex keep(cx, n - 1, base.level + 1);
  keep.cells = out.fine_tree_keys;
  keep.cells.push_back(out.gate_cell);
  keep.normalize();
  out.Z = walls.set_minus(keep);
  out.inner_cubes = inner;

  out.cert = validate_separating(base, out.Z);
  return out;
}

// Component, core, and the interface between them for one boundary piece.
struct CoreTriple {
  Subcomplex comp;      // cubes of the cut component
  Subcomplex core;      // comp minus the star of Z
  Subcomplex inner_bd;  // boundary cells of the core facing Z
  bool inner_bd_on_star = false;  // every inner cell is a face of a star cube
  bool core_lifts_isomorphically = false;  // no cut between two core cubes
};

inline CoreTriple comp_lift_core(const Subcomplex& base, const Subcomplex& Z,
                                 int32_t sigma_idx) {
  const CubicalComplex& cx = *base.cx;
  const int n = cx.n;
  const int j = Z.level - base.level;
  Subcomplex P = (j == 0) ? base : base.refine(j);

  Graph g = build_adjacency(P);
  std::vector<char> alive = cut_filter(g, Z);
  std::vector<int32_t> label = components(g, alive);

  std::vector<Subcomplex> sig0 = boundary_components(base);
  assert(sigma_idx >= 0 && size_t(sigma_idx) < sig0.size());
  Subcomplex sigma =
      (j == 0) ? sig0[size_t(sigma_idx)] : sig0[size_t(sigma_idx)].refine(j);

  std::vector<CubeRef> cand;
  P.cells_containing(sigma.cells.front(), cand);
  int32_t lbl = -1;
  for (const CubeRef& q : cand) {
    int32_t vi = P.index_of(q);
    if (vi >= 0) lbl = label[size_t(vi)];
  }
  assert(lbl >= 0);

  CoreTriple out{Subcomplex(cx, n, Z.level), Subcomplex(cx, n, Z.level),
                 Subcomplex(cx, n - 1, Z.level), false, false};
  for (size_t v = 0; v < P.cells.size(); ++v)
    if (label[v] == lbl) out.comp.cells.push_back(P.cells[v]);
  out.comp.normalize();

  Subcomplex stZ = P.star_of(Z);
  out.core = out.comp.set_minus(stZ);
  out.inner_bd = out.core.boundary().set_minus(sigma);

  out.inner_bd_on_star = true;
  for (const CubeRef& f : out.inner_bd.cells)
    if (!stZ.span_contains(f)) {
      out.inner_bd_on_star = false;
      break;
    }

  out.core_lifts_isomorphically = true;
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (!alive[e] && out.core.contains(P.cells[size_t(g.edges[e][0])]) &&
        out.core.contains(P.cells[size_t(g.edges[e][1])]))
      out.core_lifts_isomorphically = false;
  return out;
}

// Degenerate boundary counts: one boundary component runs the initial
// construction directly; a closed complex first opens a hole by removing the
// middle-third cube of its least chart, creating the single boundary piece.
inline InitialSeparating construct_degenerate(const Subcomplex& base, int m) {
  const CubicalComplex& cx = *base.cx;
  if (m == 1) {
    if (boundary_components(base).size() != 1)
      throw ConstructionError("BadIndex", "expected one boundary component");
    return construct_initial(base, 0, true);
  }
  if (m != 0) throw ConstructionError("BadIndex", "m must be 0 or 1 here");
  if (!base.boundary().empty())
    throw ConstructionError("NotClosed", "complex has boundary cells");
  Subcomplex fine = base.refine(1);
  CubeRef hole = center_child(cx, base.cells.front());
  Subcomplex holeSub(cx, cx.n, fine.level);
  holeSub.cells.push_back(hole);
  holeSub.normalize();
  Subcomplex dom = fine.set_minus(holeSub);
  return construct_initial(dom, 0, false);
}

}  // namespace wada
