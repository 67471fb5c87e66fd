#pragma once
// A finite cubical complex presented as glued unit charts.
//
// Every chart is [0,1]^n.  Chart faces are indexed axis*2 + side.  A gluing
// identifies face_a of chart a with face_b of chart b through a signed axis
// permutation: perm[i] = ±(j+1) sends coordinate i of chart a to coordinate j
// of chart b, reversed when negative.  Cells on glued faces therefore have
// several chart representations; the canonical one is the minimum over the
// gluing orbit, and all set-valued operations work on canonical references.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "wada/base.hpp"
#include "wada/cube.hpp"

namespace wada {

struct Gluing {
  int32_t chart_a = 0;
  int face_a = 0;
  int32_t chart_b = 0;
  int face_b = 0;
  std::array<int8_t, MAXN> perm{1, 2, 3, 4};
};

namespace detail {
inline std::array<int8_t, MAXN> invert_perm(const std::array<int8_t, MAXN>& p,
                                            int n) {
  std::array<int8_t, MAXN> inv{0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    int j = std::abs(p[i]) - 1;
    inv[j] = int8_t(p[i] > 0 ? (i + 1) : -(i + 1));
  }
  return inv;
}
}  // namespace detail

class CubicalComplex {
 public:
  int n = 3;
  int32_t num_charts = 0;
  std::vector<Gluing> gluings;

  // Must be called after charts/gluings are set and before any cell queries.
  void finalize() {
    if (n < 1 || n > MAXN)
      throw ConstructionError("UnsupportedDimension",
                              "chart dimension must be in [1, " +
                                  std::to_string(MAXN) + "], got " +
                                  std::to_string(n));
    if (num_charts < 1)
      throw ConstructionError("EmptyComplex", "complex has no charts");
    links_.assign(size_t(num_charts) * size_t(2 * n), Link{});
    for (const Gluing& g : gluings) {
      validate_gluing(g);
      Link la;
      la.glued = true;
      la.other_chart = g.chart_b;
      la.perm = g.perm;
      Link lb;
      lb.glued = true;
      lb.other_chart = g.chart_a;
      lb.perm = detail::invert_perm(g.perm, n);
      set_link(g.chart_a, g.face_a, la);
      set_link(g.chart_b, g.face_b, lb);
    }
  }

  bool face_glued(int32_t chart, int face) const {
    return link(chart, face).glued;
  }

  // q must lie in chart face `face` (the normal axis a point at the face
  // plane).  Returns the representation of the same cell in the glued chart.
  CubeRef transfer(const CubeRef& q, int face) const {
    const Link& l = link(q.chart, face);
    assert(l.glued);
    int64_t side = pow3(q.level);
    CubeRef r;
    r.chart = l.other_chart;
    r.level = q.level;
    r.point_mask = 0;
    for (int i = 0; i < n; ++i) {
      int j = std::abs(l.perm[i]) - 1;
      bool flip = l.perm[i] < 0;
      if (q.point_axis(i)) {
        r.point_mask |= uint8_t(1u << j);
        r.origin[j] = int32_t(flip ? side - q.origin[i] : q.origin[i]);
      } else {
        r.origin[j] = int32_t(flip ? side - 1 - q.origin[i] : q.origin[i]);
      }
    }
    return r;
  }

  // All chart representations of the cell, sorted.
  void orbit(const CubeRef& q, std::vector<CubeRef>& out) const {
    out.clear();
    out.push_back(q);
    size_t head = 0;
    while (head < out.size()) {
      CubeRef r = out[head++];
      int64_t side = pow3(r.level);
      for (int a = 0; a < n; ++a) {
        if (!r.point_axis(a)) continue;
        int face = -1;
        if (r.origin[a] == 0)
          face = 2 * a;
        else if (r.origin[a] == side)
          face = 2 * a + 1;
        if (face < 0 || !face_glued(r.chart, face)) continue;
        CubeRef t = transfer(r, face);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
    }
    std::sort(out.begin(), out.end());
  }

  // Orbit annotated with the accumulated signed axis maps: maps[i] sends the
  // axes of q's chart to the axes of reps[i]'s chart (same encoding as
  // Gluing::perm), so that applying maps[i] to q yields reps[i].
  void orbit_maps(const CubeRef& q, std::vector<CubeRef>& reps,
                  std::vector<std::array<int8_t, MAXN>>& maps) const {
    reps.clear();
    maps.clear();
    reps.push_back(q);
    std::array<int8_t, MAXN> id{0, 0, 0, 0};
    for (int i = 0; i < n; ++i) id[i] = int8_t(i + 1);
    maps.push_back(id);
    size_t head = 0;
    while (head < reps.size()) {
      CubeRef r = reps[head];
      std::array<int8_t, MAXN> m = maps[head];
      ++head;
      int64_t side = pow3(r.level);
      for (int a = 0; a < n; ++a) {
        if (!r.point_axis(a)) continue;
        int face = -1;
        if (r.origin[a] == 0)
          face = 2 * a;
        else if (r.origin[a] == side)
          face = 2 * a + 1;
        if (face < 0 || !face_glued(r.chart, face)) continue;
        CubeRef t = transfer(r, face);
        if (std::find(reps.begin(), reps.end(), t) != reps.end()) continue;
        const Link& l = link(r.chart, face);
        std::array<int8_t, MAXN> composed{0, 0, 0, 0};
        for (int i = 0; i < n; ++i) {
          int j = std::abs(m[i]) - 1;
          bool flip = m[i] < 0;
          int k = std::abs(l.perm[j]) - 1;
          bool flip2 = l.perm[j] < 0;
          composed[i] = int8_t((flip != flip2) ? -(k + 1) : (k + 1));
        }
        reps.push_back(t);
        maps.push_back(composed);
      }
    }
  }

  CubeRef canonical(const CubeRef& q) const {
    if (q.point_mask == 0) return q;  // interior full cube: trivial orbit
    bool on_face = false;
    int64_t side = pow3(q.level);
    for (int a = 0; a < n && !on_face; ++a)
      if (q.point_axis(a) && (q.origin[a] == 0 || q.origin[a] == side))
        on_face = true;
    if (!on_face) return q;
    std::vector<CubeRef> reps;
    orbit(q, reps);
    return reps.front();
  }

  // Signed axis map of the gluing at `face` (Gluing::perm encoding); sets the
  // chart it leads to.  Only valid when face_glued(chart, face).
  std::array<int8_t, MAXN> face_perm(int32_t chart, int face,
                                     int32_t& other_chart) const {
    const Link& l = link(chart, face);
    assert(l.glued);
    other_chart = l.other_chart;
    return l.perm;
  }

  // Canonical n-cubes of the full complex containing the cell x.
  void cubes_containing(const CubeRef& x, std::vector<CubeRef>& out) const {
    out.clear();
    std::vector<CubeRef> reps;
    orbit(x, reps);
    int64_t side = pow3(x.level);
    for (const CubeRef& r : reps) {
      std::vector<CubeRef> cand;
      cand.push_back(r);
      for (int a = 0; a < n; ++a) {
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
        if (c.point_mask == 0) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

 private:
  struct Link {
    bool glued = false;
    int32_t other_chart = 0;
    std::array<int8_t, MAXN> perm{1, 2, 3, 4};
  };
  std::vector<Link> links_;

  const Link& link(int32_t chart, int face) const {
    return links_[size_t(chart) * size_t(2 * n) + size_t(face)];
  }

  void set_link(int32_t chart, int face, const Link& l) {
    Link& slot = links_[size_t(chart) * size_t(2 * n) + size_t(face)];
    if (slot.glued)
      throw ConstructionError(
          "BadGluing", "chart " + std::to_string(chart) + " face " +
                           std::to_string(face) + " glued twice");
    slot = l;
  }

  void validate_gluing(const Gluing& g) const {
    auto bad = [&](const std::string& why) {
      throw ConstructionError("BadGluing", why);
    };
    if (g.chart_a < 0 || g.chart_a >= num_charts || g.chart_b < 0 ||
        g.chart_b >= num_charts)
      bad("chart id out of range");
    if (g.face_a < 0 || g.face_a >= 2 * n || g.face_b < 0 || g.face_b >= 2 * n)
      bad("face index out of range");
    if (g.chart_a == g.chart_b && g.face_a == g.face_b)
      bad("face glued to itself");
    bool seen[MAXN] = {false, false, false, false};
    for (int i = 0; i < n; ++i) {
      int j = std::abs(g.perm[i]) - 1;
      if (j < 0 || j >= n || seen[j]) bad("perm is not a signed permutation");
      seen[j] = true;
    }
    int af = g.face_a / 2, sa = g.face_a % 2;
    int bf = g.face_b / 2, sb = g.face_b % 2;
    if (std::abs(g.perm[af]) - 1 != bf)
      bad("perm does not map the glued axis to the glued axis");
    if ((g.perm[af] > 0) != (sa == sb))
      bad("perm does not map the glued face onto the glued face");
  }
};

}  // namespace wada
