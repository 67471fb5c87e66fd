#pragma once
// Adjacency graphs of pure subcomplexes, cut-graphs, components, spanning
// forests, and the cell certificates used for tunnels.
//
// Vertices of the adjacency graph are the cells of the subcomplex (in sorted
// order); an edge joins two cells sharing a codimension-1 face and is keyed
// by that face.  Parallel edges with distinct keys are kept: cutting removes
// edges by key, not by endpoint pair.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "wada/complex.hpp"
#include "wada/cube.hpp"
#include "wada/subcomplex.hpp"

namespace wada {

struct Graph {
  int32_t nv = 0;
  std::vector<std::array<int32_t, 2>> edges;  // u < v, sorted by (u,v,key)
  std::vector<CubeRef> edge_keys;             // shared face per edge

  // CSR adjacency built by finalize_adjacency()
  std::vector<int32_t> adj_off;
  std::vector<int32_t> adj_nbr;
  std::vector<int32_t> adj_eid;

  void finalize_adjacency() {
    std::vector<size_t> order(edges.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (edges[a] != edges[b]) return edges[a] < edges[b];
      return edge_keys[a] < edge_keys[b];
    });
    std::vector<std::array<int32_t, 2>> es(edges.size());
    std::vector<CubeRef> ks(edges.size());
    for (size_t i = 0; i < order.size(); ++i) {
      es[i] = edges[order[i]];
      ks[i] = edge_keys[order[i]];
    }
    edges = std::move(es);
    edge_keys = std::move(ks);

    adj_off.assign(size_t(nv) + 1, 0);
    for (const auto& e : edges) {
      ++adj_off[size_t(e[0]) + 1];
      ++adj_off[size_t(e[1]) + 1];
    }
    for (size_t i = 1; i < adj_off.size(); ++i) adj_off[i] += adj_off[i - 1];
    adj_nbr.assign(size_t(adj_off.back()), 0);
    adj_eid.assign(size_t(adj_off.back()), 0);
    std::vector<int32_t> cur(adj_off.begin(), adj_off.end() - 1);
    for (size_t e = 0; e < edges.size(); ++e) {
      int32_t u = edges[e][0], v = edges[e][1];
      adj_nbr[size_t(cur[size_t(u)])] = v;
      adj_eid[size_t(cur[size_t(u)]++)] = int32_t(e);
      adj_nbr[size_t(cur[size_t(v)])] = u;
      adj_eid[size_t(cur[size_t(v)]++)] = int32_t(e);
    }
  }
};

// Adjacency graph of a pure subcomplex: vertex i is S.cells[i].
inline Graph build_adjacency(const Subcomplex& S) {
  Graph g;
  g.nv = int32_t(S.cells.size());
  const int d = S.dim;
  // (face, cell index) incidence pairs over every face slot
  std::vector<std::pair<CubeRef, int32_t>> inc;
  inc.reserve(S.cells.size() * size_t(2 * d));
  std::vector<CubeRef> fs;
  for (size_t i = 0; i < S.cells.size(); ++i) {
    enumerate_faces_of_dim(S.cells[i], S.cx->n, d - 1, fs);
    for (const CubeRef& f : fs)
      inc.emplace_back(S.cx->canonical(f), int32_t(i));
  }
  std::sort(inc.begin(), inc.end());
  for (size_t i = 0; i < inc.size();) {
    size_t j = i;
    while (j < inc.size() && inc[j].first == inc[i].first) ++j;
    for (size_t a = i; a < j; ++a)
      for (size_t b = a + 1; b < j; ++b) {
        int32_t u = inc[a].second, v = inc[b].second;
        if (u == v) continue;  // a cell meeting itself across a gluing
        g.edges.push_back({std::min(u, v), std::max(u, v)});
        g.edge_keys.push_back(inc[i].first);
      }
    i = j;
  }
  g.finalize_adjacency();
  return g;
}

// Component labels (0-based, in order of first appearance by vertex index).
// Edges whose id is flagged false in `alive` are ignored; pass empty to use
// every edge.
inline std::vector<int32_t> components(const Graph& g,
                                       const std::vector<char>& alive = {}) {
  std::vector<int32_t> comp(size_t(g.nv), -1);
  int32_t next = 0;
  std::vector<int32_t> stack;
  for (int32_t s = 0; s < g.nv; ++s) {
    if (comp[size_t(s)] >= 0) continue;
    comp[size_t(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int32_t u = stack.back();
      stack.pop_back();
      for (int32_t it = g.adj_off[size_t(u)]; it < g.adj_off[size_t(u) + 1];
           ++it) {
        int32_t eid = g.adj_eid[size_t(it)];
        if (!alive.empty() && !alive[size_t(eid)]) continue;
        int32_t v = g.adj_nbr[size_t(it)];
        if (comp[size_t(v)] < 0) {
          comp[size_t(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline int32_t component_count(const std::vector<int32_t>& comp) {
  int32_t m = -1;
  for (int32_t c : comp) m = std::max(m, c);
  return m + 1;
}

inline bool is_connected(const Graph& g) {
  if (g.nv == 0) return false;
  return component_count(components(g)) == 1;
}

inline bool is_tree(const Graph& g) {
  return g.nv >= 1 && g.edges.size() == size_t(g.nv) - 1 && is_connected(g);
}

// Edge filter for the cut-graph: keep an edge unless its key face lies in Z
// (a pure codim-1 subcomplex at the same level).
inline std::vector<char> cut_filter(const Graph& g, const Subcomplex& Z) {
  std::vector<char> alive(g.edges.size(), 1);
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (Z.contains(g.edge_keys[e])) alive[e] = 0;
  return alive;
}

// BFS distances from a seed set (in edge count); -1 where unreachable.
inline std::vector<int32_t> bfs_distance(const Graph& g,
                                         const std::vector<int32_t>& seeds,
                                         const std::vector<char>& alive = {}) {
  std::vector<int32_t> dist(size_t(g.nv), -1);
  std::vector<int32_t> q;
  for (int32_t s : seeds)
    if (dist[size_t(s)] < 0) {
      dist[size_t(s)] = 0;
      q.push_back(s);
    }
  for (size_t h = 0; h < q.size(); ++h) {
    int32_t u = q[h];
    for (int32_t it = g.adj_off[size_t(u)]; it < g.adj_off[size_t(u) + 1];
         ++it) {
      int32_t eid = g.adj_eid[size_t(it)];
      if (!alive.empty() && !alive[size_t(eid)]) continue;
      int32_t v = g.adj_nbr[size_t(it)];
      if (dist[size_t(v)] < 0) {
        dist[size_t(v)] = dist[size_t(u)] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

struct DisjointSet {
  std::vector<int32_t> parent;
  explicit DisjointSet(int32_t n) : parent(size_t(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int32_t find(int32_t x) {
    while (parent[size_t(x)] != x) {
      parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
      x = parent[size_t(x)];
    }
    return x;
  }
  bool unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);  // keep the least index as root
    parent[size_t(b)] = a;
    return true;
  }
};

// Deterministic spanning forest: Kruskal over edges sorted by key.  Returns
// edge ids of the forest.
inline std::vector<int32_t> spanning_forest(const Graph& g,
                                            const std::vector<char>& alive = {}) {
  std::vector<size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (g.edge_keys[a] != g.edge_keys[b]) return g.edge_keys[a] < g.edge_keys[b];
    return g.edges[a] < g.edges[b];
  });
  DisjointSet ds(g.nv);
  std::vector<int32_t> tree;
  for (size_t e : order) {
    if (!alive.empty() && !alive[e]) continue;
    if (ds.unite(g.edges[e][0], g.edges[e][1])) tree.push_back(int32_t(e));
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

// Spanning forest that must include the given edges.  The forced edges are
// united first (in the given order; a forced edge closing a cycle throws),
// then the remaining alive edges extend the forest in deterministic
// (key, endpoints) order.  Returns sorted edge ids including the forced ones.
inline std::vector<int32_t> spanning_forest_seeded(
    const Graph& g, const std::vector<int32_t>& forced,
    const std::vector<char>& alive = {}) {
  DisjointSet ds(g.nv);
  std::vector<int32_t> tree;
  for (int32_t e : forced) {
    if (!alive.empty() && !alive[size_t(e)])
      throw VerificationError("ForcedEdgeCut", "required edge is filtered out");
    if (!ds.unite(g.edges[size_t(e)][0], g.edges[size_t(e)][1]))
      throw VerificationError("ForcedEdgeCycle", "required edges form a cycle");
    tree.push_back(e);
  }
  std::vector<size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (g.edge_keys[a] != g.edge_keys[b]) return g.edge_keys[a] < g.edge_keys[b];
    return g.edges[a] < g.edges[b];
  });
  for (size_t e : order) {
    if (!alive.empty() && !alive[e]) continue;
    if (ds.unite(g.edges[e][0], g.edges[e][1])) tree.push_back(int32_t(e));
  }
  std::sort(tree.begin(), tree.end());
  tree.erase(std::unique(tree.begin(), tree.end()), tree.end());
  return tree;
}

// Does the cell `big` contain `small`, where either may be a non-canonical
// reference (gluing-aware containment).
inline bool contains_canonical(const CubicalComplex& cx, const CubeRef& big,
                               const CubeRef& small) {
  std::vector<CubeRef> reps;
  cx.orbit(small, reps);
  std::vector<CubeRef> breps;
  cx.orbit(big, breps);
  for (const CubeRef& b : breps)
    for (const CubeRef& s : reps)
      if (contains_cell(b, s, cx.n)) return true;
  return false;
}

// Components of the link graph of a cell sigma inside a realization: vertices
// are the G-vertices whose cube contains sigma, joined where a G-edge key
// contains sigma.  Each component is one copy of sigma in the realization.
// `vertex_of` maps a canonical ambient cube to its G-vertex index (or -1).
template <typename VertexLookup>
inline std::vector<std::vector<int32_t>> link_components(
    const CubicalComplex& cx, const Graph& g, const CubeRef& sigma,
    VertexLookup&& vertex_of) {
  std::vector<CubeRef> cubes;
  cx.cubes_containing(sigma, cubes);
  std::vector<int32_t> verts;
  for (const CubeRef& c : cubes) {
    int32_t v = vertex_of(c);
    if (v >= 0) verts.push_back(v);
  }
  std::sort(verts.begin(), verts.end());
  std::vector<std::vector<int32_t>> out;
  if (verts.empty()) return out;
  auto vidx = [&](int32_t v) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    return (it != verts.end() && *it == v) ? int32_t(it - verts.begin()) : -1;
  };
  DisjointSet ds(int32_t(verts.size()));
  for (int32_t v : verts) {
    for (int32_t it = g.adj_off[size_t(v)]; it < g.adj_off[size_t(v) + 1];
         ++it) {
      int32_t eid = g.adj_eid[size_t(it)];
      const CubeRef& key = g.edge_keys[size_t(eid)];
      if (!contains_canonical(cx, key, sigma)) continue;
      int32_t w = g.adj_nbr[size_t(it)];
      int32_t a = vidx(v), b = vidx(w);
      if (a >= 0 && b >= 0) ds.unite(a, b);
    }
  }
  std::vector<std::pair<int32_t, int32_t>> rep;  // (root, vertex)
  for (size_t i = 0; i < verts.size(); ++i)
    rep.emplace_back(ds.find(int32_t(i)), verts[i]);
  std::sort(rep.begin(), rep.end());
  for (size_t i = 0; i < rep.size();) {
    size_t j = i;
    std::vector<int32_t> comp;
    while (j < rep.size() && rep[j].first == rep[i].first)
      comp.push_back(rep[j++].second);
    out.push_back(std::move(comp));
    i = j;
  }
  return out;
}

enum class CellCheck { kCell, kNotCell, kUndetermined };

namespace detail {

// Is the union of the given face slots of one n-cube a closed (n-1)-disk?
// Slots are (axis, side) pairs; n in {2, 3}.
inline bool slots_form_disk(int n, const std::vector<std::pair<int, int>>& F) {
  size_t c = F.size();
  if (c == 0) return false;
  if (c == 1) return true;
  auto opposite = [&](size_t i, size_t j) {
    return F[i].first == F[j].first && F[i].second != F[j].second;
  };
  if (n == 2) {
    if (c == 2) return !opposite(0, 1);
    return c == 3;  // 4 would be the whole circle
  }
  // n == 3
  if (c == 2) return !opposite(0, 1);
  if (c == 3) return true;  // any triple of square faces is a bent strip
  if (c == 4) {
    // disk iff the two absent faces are adjacent (else it is a band)
    std::vector<std::pair<int, int>> absent;
    for (int a = 0; a < 3; ++a)
      for (int s = 0; s < 2; ++s)
        if (std::find(F.begin(), F.end(), std::make_pair(a, s)) == F.end())
          absent.emplace_back(a, s);
    return absent[0].first != absent[1].first;
  }
  if (c == 5) return true;
  return false;  // all 6: the whole sphere
}

}  // namespace detail

// Leaf-collapse certificate that |S| is an n-cell, for a pure n-dim
// subcomplex given in ambient form.  Sufficient, not complete: returns
// kUndetermined when no safe collapse order is found.
inline CellCheck cell_certificate(const Subcomplex& S) {
  const CubicalComplex& cx = *S.cx;
  const int n = cx.n;
  if (n > 3) return CellCheck::kUndetermined;
  if (S.empty()) return CellCheck::kNotCell;

  auto embedded = [&](const CubeRef& q) {
    std::vector<CubeRef> fs, canon;
    enumerate_faces(q, n, fs);
    for (const CubeRef& f : fs) canon.push_back(cx.canonical(f));
    std::sort(canon.begin(), canon.end());
    return std::adjacent_find(canon.begin(), canon.end()) == canon.end();
  };

  // q can be collapsed away from `work` when its face slots shared with the
  // rest form a closed disk and every shared lower cell lies inside a shared
  // face.
  auto removable = [&](const std::vector<CubeRef>& work, const CubeRef& q) {
    if (!embedded(q)) return false;
    std::vector<CubeRef> fs, cubes;
    std::vector<std::pair<int, int>> slots;
    std::vector<CubeRef> shared_faces;
    for (int a = 0; a < n; ++a)
      for (int s = 0; s < 2; ++s) {
        CubeRef f = cx.canonical(face_cell(q, a, s));
        cx.cubes_containing(f, cubes);
        bool shared = false;
        for (const CubeRef& c : cubes)
          if (c != q && std::binary_search(work.begin(), work.end(), c))
            shared = true;
        if (shared) {
          slots.emplace_back(a, s);
          shared_faces.push_back(f);
        }
      }
    if (slots.empty()) return false;
    if (!detail::slots_form_disk(n, slots)) return false;
    enumerate_faces(q, n, fs);
    for (const CubeRef& cell : fs) {
      if (cell == q) continue;
      if (cell.dim(n) == n - 1) continue;  // handled via slots
      cx.cubes_containing(cell, cubes);
      bool shared = false;
      for (const CubeRef& c : cubes)
        if (!(c == q) && std::binary_search(work.begin(), work.end(), c))
          shared = true;
      if (!shared) continue;
      bool inside = false;
      for (const CubeRef& f : shared_faces)
        if (contains_canonical(cx, f, cell)) inside = true;
      if (!inside) return false;
    }
    return true;
  };

  // Depth-first collapse with a step budget.  The first branch at every node
  // is the plain greedy order; backtracking only kicks in when that order
  // jams, and visited dead states are memoised so re-entry is cheap.
  std::unordered_set<uint64_t> dead;
  auto key = [](const std::vector<CubeRef>& w) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (const CubeRef& c : w) {
      mix(uint64_t(uint32_t(c.chart)));
      mix(uint64_t(uint8_t(c.level)) | (uint64_t(c.point_mask) << 8));
      for (int a = 0; a < MAXN; ++a) mix(uint64_t(uint32_t(c.origin[a])));
    }
    return h;
  };
  int64_t budget = 40000;
  std::function<bool(std::vector<CubeRef>&)> collapse =
      [&](std::vector<CubeRef>& work) -> bool {
    if (work.size() == 1) return embedded(work[0]);
    if (budget <= 0) return false;
    uint64_t k = key(work);
    if (dead.count(k)) return false;
    for (size_t qi = 0; qi < work.size(); ++qi) {
      if (--budget <= 0) return false;
      if (!removable(work, work[qi])) continue;
      CubeRef q = work[qi];
      work.erase(work.begin() + long(qi));
      if (collapse(work)) return true;
      work.insert(work.begin() + long(qi), q);
    }
    dead.insert(k);
    return false;
  };
  std::vector<CubeRef> work = S.cells;
  return collapse(work) ? CellCheck::kCell : CellCheck::kUndetermined;
}

// Deterministic leaf removal schedule of a tree graph: repeatedly remove the
// least-index leaf (never the designated root).  Returns vertex indices in
// removal order; the root is left in place.
inline std::vector<int32_t> leaf_schedule(const Graph& g, int32_t root) {
  assert(is_tree(g));
  std::vector<int32_t> degree(size_t(g.nv), 0);
  std::vector<char> gone(size_t(g.nv), 0);
  for (const auto& e : g.edges) {
    ++degree[size_t(e[0])];
    ++degree[size_t(e[1])];
  }
  std::vector<int32_t> order;
  for (int32_t round = 0; round + 1 < g.nv; ++round) {
    int32_t leaf = -1;
    for (int32_t v = 0; v < g.nv && leaf < 0; ++v)
      if (!gone[size_t(v)] && v != root && degree[size_t(v)] <= 1) leaf = v;
    assert(leaf >= 0);
    gone[size_t(leaf)] = 1;
    order.push_back(leaf);
    for (int32_t it = g.adj_off[size_t(leaf)];
         it < g.adj_off[size_t(leaf) + 1]; ++it) {
      int32_t v = g.adj_nbr[size_t(it)];
      if (!gone[size_t(v)]) --degree[size_t(v)];
    }
  }
  return order;
}

}  // namespace wada
