#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "wada/box.hpp"
#include "wada/complex.hpp"
#include "wada/cube.hpp"
#include "wada/good.hpp"
#include "wada/graphs.hpp"
#include "wada/subcomplex.hpp"

using namespace wada;

namespace {

CubicalComplex single_chart(int n) {
  CubicalComplex cx;
  cx.n = n;
  cx.num_charts = 1;
  cx.finalize();
  return cx;
}

// Deterministic generator so every run exercises identical cases.
struct Rng {
  uint64_t s = 0x9e3779b97f4a7c15ull;
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int range(int lo, int hi) {  // inclusive
    return lo + int(next() % uint64_t(hi - lo + 1));
  }
};

Box random_box(Rng& rng, int n, int level, uint8_t pm) {
  int side = int(pow3(level));
  Box b;
  b.chart = 0;
  b.level = int8_t(level);
  b.point_mask = pm;
  for (int a = 0; a < n; ++a) {
    int max = b.point_axis(a) ? side : side - 1;
    int x = rng.range(0, max);
    int y = rng.range(0, max);
    b.lo[a] = std::min(x, y);
    b.hi[a] = std::max(x, y);
  }
  return b;
}

std::vector<CubeRef> cells_of(const Box& b, int n) {
  BoxSet s(n);
  s.add(b);
  std::vector<CubeRef> out;
  REQUIRE(s.enumerate(out, 1000000));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CubeRef> sorted_cells(const BoxSet& s) {
  std::vector<CubeRef> out;
  REQUIRE(s.enumerate(out, 1000000));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("box count, membership and least cell agree with enumeration") {
  Rng rng;
  for (int rep = 0; rep < 50; ++rep) {
    int n = rng.range(2, 3);
    int level = rng.range(0, 2);
    uint8_t pm = uint8_t(rng.next() % (1u << n));
    Box b = random_box(rng, n, level, pm);
    REQUIRE(box_valid(b, n));
    std::vector<CubeRef> cells = cells_of(b, n);
    REQUIRE(BigCount(cells.size()) == box_count(b, n));
    REQUIRE(cells.front() == least_cell(b, n));
    for (const CubeRef& q : cells) REQUIRE(box_contains(b, q, n));
    CubeRef outside = least_cell(b, n);
    outside.origin[0] -= 1;
    if (outside.origin[0] >= 0) REQUIRE(!box_contains(b, outside, n));
  }
}

TEST_CASE("box validity rejects inverted and out-of-range axes") {
  Box b = chart_box(0, 1, 3);
  REQUIRE(box_valid(b, 3));
  REQUIRE(box_count(b, 3) == 27);
  Box bad = b;
  bad.hi[1] = 3;  // span origins stop at side-1
  REQUIRE(!box_valid(bad, 3));
  Box plane = face_box(b, 2, 1);
  REQUIRE(box_valid(plane, 3));  // point plane may sit at the chart side
  REQUIRE(plane.lo[2] == 3);
  Box inv = b;
  inv.lo[0] = 2;
  inv.hi[0] = 1;
  REQUIRE(!box_valid(inv, 3));
}

TEST_CASE("intersection and subtraction match per-cell set algebra") {
  Rng rng;
  rng.s = 17;
  for (int rep = 0; rep < 120; ++rep) {
    int n = rng.range(2, 3);
    int level = rng.range(1, 2);
    uint8_t pm = uint8_t(rng.next() % (1u << n));
    Box a = random_box(rng, n, level, pm);
    Box b = random_box(rng, n, level, pm);
    std::vector<CubeRef> ca = cells_of(a, n);
    std::vector<CubeRef> cb = cells_of(b, n);

    std::vector<CubeRef> want_meet;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                          std::back_inserter(want_meet));
    auto ov = box_intersect(a, b, n);
    if (ov) {
      REQUIRE(cells_of(*ov, n) == want_meet);
    } else {
      REQUIRE(want_meet.empty());
    }

    std::vector<CubeRef> want_diff;
    std::set_difference(ca.begin(), ca.end(), cb.begin(), cb.end(),
                        std::back_inserter(want_diff));
    std::vector<Box> pieces;
    box_subtract(a, b, n, pieces);
    REQUIRE(pieces.size() <= size_t(2 * n));
    std::vector<CubeRef> got;
    for (size_t i = 0; i < pieces.size(); ++i) {
      std::vector<CubeRef> pc = cells_of(pieces[i], n);
      for (size_t j = i + 1; j < pieces.size(); ++j)
        REQUIRE(!box_intersect(pieces[i], pieces[j], n));
      got.insert(got.end(), pc.begin(), pc.end());
    }
    std::sort(got.begin(), got.end());
    REQUIRE(got == want_diff);
  }
}

TEST_CASE("boxes of different cell shape never intersect") {
  Box cubes = chart_box(0, 1, 3);
  Box walls = wall_slab(cubes, 0);
  REQUIRE(!box_intersect(cubes, walls, 3));
  std::vector<Box> pieces;
  box_subtract(cubes, walls, 3, pieces);
  REQUIRE(pieces.size() == 1);
  REQUIRE(pieces[0] == cubes);
}

TEST_CASE("box set algebra tracks a reference cell set") {
  Rng rng;
  rng.s = 99;
  for (int rep = 0; rep < 20; ++rep) {
    int n = 3;
    int level = 2;
    uint8_t pm = (rep % 3 == 0) ? uint8_t(1) : uint8_t(0);
    BoxSet s(n);
    std::set<CubeRef> ref;
    for (int op = 0; op < 12; ++op) {
      Box b = random_box(rng, n, level, pm);
      std::vector<CubeRef> bc = cells_of(b, n);
      if (rng.next() % 3 == 0) {
        s.subtract(b);
        for (const CubeRef& q : bc) ref.erase(q);
      } else {
        s.add(b);
        ref.insert(bc.begin(), bc.end());
      }
      REQUIRE(s.count() == BigCount(ref.size()));
    }
    // Disjointness of the internal representation.
    for (size_t i = 0; i < s.boxes().size(); ++i)
      for (size_t j = i + 1; j < s.boxes().size(); ++j)
        REQUIRE(!box_intersect(s.boxes()[i], s.boxes()[j], n));
    std::vector<CubeRef> want(ref.begin(), ref.end());
    REQUIRE(sorted_cells(s) == want);
    size_t before = s.size();
    s.coalesce();
    REQUIRE(s.size() <= before);
    REQUIRE(sorted_cells(s) == want);
    for (const CubeRef& q : want) REQUIRE(s.contains(q));
  }
}

TEST_CASE("box set equality is representation independent") {
  int n = 3;
  Box whole = chart_box(0, 1, n);
  BoxSet a(n), b(n);
  a.add(whole);
  // Same cells added as 27 singletons in scrambled order.
  std::vector<CubeRef> cells = cells_of(whole, n);
  std::reverse(cells.begin(), cells.end());
  for (const CubeRef& q : cells) b.add(box_of(q, n));
  REQUIRE(b.size() == 27);
  REQUIRE(a.equal(b));
  REQUIRE(b.equal(a));
  b.coalesce();
  REQUIRE(b.size() == 1);
  REQUIRE(b.boxes()[0] == whole);
  b.subtract(box_of(cells[5], n));
  REQUIRE(!a.equal(b));
  REQUIRE(a.count() == b.count() + 1);
}

TEST_CASE("refinement of a box matches per-cell descendant closure") {
  Rng rng;
  rng.s = 2024;
  CubicalComplex cx = single_chart(3);
  for (int rep = 0; rep < 12; ++rep) {
    int n = 3;
    int level = rng.range(0, 1);
    int t = rng.range(1, 2);
    uint8_t pm = uint8_t(rng.next() % 8u);
    Box b = random_box(rng, n, level, pm);
    std::vector<Box> fine;
    box_refine(b, t, n, fine);
    BoxSet got(n);
    for (const Box& f : fine) got.add(f);

    // Oracle: all level+t cells of the same shape inside the closed union.
    std::set<CubeRef> want;
    for (const CubeRef& q : cells_of(b, n)) {
      std::vector<CubeRef> level1, level2;
      level1.push_back(q);
      for (int step = 0; step < t; ++step) {
        level2.clear();
        std::vector<CubeRef> kids;
        for (const CubeRef& c : level1) {
          children(c, n, kids);
          level2.insert(level2.end(), kids.begin(), kids.end());
        }
        level1.swap(level2);
      }
      want.insert(level1.begin(), level1.end());
    }
    REQUIRE(got.count() == BigCount(want.size()));
    std::vector<CubeRef> wantv(want.begin(), want.end());
    REQUIRE(sorted_cells(got) == wantv);

    // Exact coarsening inverts refinement piecewise.
    for (const Box& f : fine) {
      auto back = box_coarsen_exact(f, t, n);
      REQUIRE(back.has_value());
      REQUIRE((box_contains(b, least_cell(*back, n), n) ||
               box_count(*back, n) > 1));
      std::vector<Box> again;
      box_refine(*back, t, n, again);
      REQUIRE(again.size() == 1);
      REQUIRE(again[0] == f);
    }
  }
  Box odd = chart_box(0, 1, 3);
  odd.hi[0] = 1;  // width 2 is not a whole refined cover
  REQUIRE(!box_coarsen_exact(odd, 1, 3));
}

TEST_CASE("face boxes and wall slabs match per-cell face enumeration") {
  Rng rng;
  rng.s = 7;
  for (int rep = 0; rep < 20; ++rep) {
    int n = 3;
    Box b = random_box(rng, n, 2, 0);
    for (int a = 0; a < n; ++a) {
      std::set<CubeRef> lo_faces, hi_faces, all_faces;
      for (const CubeRef& q : cells_of(b, n)) {
        all_faces.insert(face_cell(q, a, 0));
        all_faces.insert(face_cell(q, a, 1));
        if (q.origin[a] == b.lo[a]) lo_faces.insert(face_cell(q, a, 0));
        if (q.origin[a] == b.hi[a]) hi_faces.insert(face_cell(q, a, 1));
      }
      std::vector<CubeRef> want_lo(lo_faces.begin(), lo_faces.end());
      std::vector<CubeRef> want_hi(hi_faces.begin(), hi_faces.end());
      std::vector<CubeRef> want_all(all_faces.begin(), all_faces.end());
      REQUIRE(cells_of(face_box(b, a, 0), n) == want_lo);
      REQUIRE(cells_of(face_box(b, a, 1), n) == want_hi);
      REQUIRE(cells_of(wall_slab(b, a), n) == want_all);
    }
  }
}

TEST_CASE("transport across gluings matches per-cell transfer") {
  CubicalComplex cx = generate_closed(3);
  Rng rng;
  rng.s = 55;
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    int32_t chart = int32_t(rng.next() % uint64_t(cx.num_charts));
    int face = int(rng.next() % uint64_t(2 * cx.n));
    if (!cx.face_glued(chart, face)) continue;
    int a = face / 2, side = face % 2;
    int level = rng.range(1, 2);
    Box b = random_box(rng, cx.n, level, 0);
    b.chart = chart;
    // Pin the box into the glued face.
    b.point_mask |= uint8_t(1u << a);
    b.lo[a] = b.hi[a] = (side == 0) ? 0 : int32_t(pow3(level));
    REQUIRE(box_valid(b, cx.n));

    Box t = transport_box(cx, b, face);
    REQUIRE(box_valid(t, cx.n));
    std::set<CubeRef> want;
    for (const CubeRef& q : cells_of(b, cx.n)) want.insert(cx.transfer(q, face));
    std::vector<CubeRef> wantv(want.begin(), want.end());
    REQUIRE(cells_of(t, cx.n) == wantv);

    // The image lies in a face of the other chart, on the axis and plane the
    // gluing permutation dictates; transporting back along that face restores
    // the original box (links store inverse maps).
    int32_t other_chart = -1;
    std::array<int8_t, MAXN> pm = cx.face_perm(chart, face, other_chart);
    REQUIRE(t.chart == other_chart);
    int back_axis = std::abs(int(pm[a])) - 1;
    int32_t img = (pm[a] < 0) ? int32_t(pow3(level)) - b.lo[a] : b.lo[a];
    int back_side = (img == 0) ? 0 : 1;
    REQUIRE(t.point_axis(back_axis));
    REQUIRE(t.lo[back_axis] == img);
    REQUIRE(t.hi[back_axis] == img);
    Box back = transport_box(cx, t, 2 * back_axis + back_side);
    REQUIRE(back == b);
    ++checked;
  }
  REQUIRE(checked >= 20);
}

TEST_CASE("axis gaps bound grid distance and detect contact") {
  int n = 3;
  Box a = chart_box(0, 2, n);
  a.hi[0] = 2;  // slab x in [0,3)
  Box b = a;
  b.lo[0] = 3;
  b.hi[0] = 5;  // touching slab
  REQUIRE(box_gap_linf(a, b, n) == 0);
  REQUIRE(box_gap_l1(a, b, n) == 0);
  REQUIRE(cube_boxes_face_adjacent(a, b, n));
  b.lo[0] = 4;
  b.hi[0] = 6;  // one cube of clearance
  REQUIRE(box_gap_linf(a, b, n) == 1);
  REQUIRE(!cube_boxes_face_adjacent(a, b, n));

  // A wall plane touching a cube row has zero gap; one plane away has one.
  Box w = face_box(a, 0, 1);  // plane x = 3
  REQUIRE(box_gap_linf(a, w, n) == 0);
  Box w2 = w;
  w2.lo[0] = w2.hi[0] = 5;
  REQUIRE(box_gap_linf(a, w2, n) == 2);
}

TEST_CASE("grid distance between boxes equals per-axis origin gaps") {
  // In one chart the face-adjacency graph distance between cube sets is the
  // sum over axes of origin-range gaps (monotone staircase paths realize it).
  Rng rng;
  rng.s = 31;
  CubicalComplex cx = single_chart(3);
  Subcomplex all = Subcomplex::whole(cx).refine(2);
  for (int rep = 0; rep < 8; ++rep) {
    Box a = random_box(rng, 3, 2, 0);
    Box b = random_box(rng, 3, 2, 0);
    int64_t want = 0;
    for (int ax = 0; ax < 3; ++ax)
      want += std::max<int64_t>(
          {0, int64_t(b.lo[ax]) - a.hi[ax], int64_t(a.lo[ax]) - b.hi[ax]});

    Graph g = build_adjacency(all);
    std::vector<int32_t> srcs, dsts;
    for (const CubeRef& q : cells_of(a, 3)) srcs.push_back(all.index_of(q));
    for (const CubeRef& q : cells_of(b, 3)) dsts.push_back(all.index_of(q));
    std::vector<int32_t> dist = bfs_distance(g, srcs);
    int64_t got = -1;
    for (int32_t v : dsts)
      if (dist[size_t(v)] >= 0 && (got < 0 || dist[size_t(v)] < got))
        got = dist[size_t(v)];
    REQUIRE(got == want);

    // Geometric gap is the step bound used by separation certificates:
    // any path must cross it, so it never exceeds the graph distance.
    REQUIRE(box_gap_l1(a, b, 3) <= got);
  }
}

TEST_CASE("face adjacency of cube boxes matches a per-cell scan") {
  Rng rng;
  rng.s = 12;
  for (int rep = 0; rep < 60; ++rep) {
    int n = 3;
    Box a = random_box(rng, n, 1, 0);
    Box b = random_box(rng, n, 1, 0);
    if (box_intersect(a, b, n)) continue;  // defined for disjoint boxes
    bool want = false;
    std::set<CubeRef> shared_faces;
    std::vector<CubeRef> ca = cells_of(a, n), cb = cells_of(b, n);
    for (const CubeRef& q : ca)
      for (const CubeRef& p : cb) {
        int diff_axis = -1;
        bool adj = true;
        for (int ax = 0; ax < n && adj; ++ax) {
          int d = std::abs(q.origin[ax] - p.origin[ax]);
          if (d == 0) continue;
          if (d == 1 && diff_axis < 0)
            diff_axis = ax;
          else
            adj = false;
        }
        if (adj && diff_axis >= 0) {
          want = true;
          int side = p.origin[diff_axis] > q.origin[diff_axis] ? 1 : 0;
          shared_faces.insert(face_cell(q, diff_axis, side));
        }
      }
    REQUIRE(cube_boxes_face_adjacent(a, b, n) == want);
    if (want) {
      Box w = contact_wall(a, b, n);
      std::vector<CubeRef> wantv(shared_faces.begin(), shared_faces.end());
      REQUIRE(cells_of(w, n) == wantv);
    }
  }
}

TEST_CASE("box sets built from cells round-trip and compress") {
  CubicalComplex holed = generate_holed_grid(3, 1, 1);
  Subcomplex K = Subcomplex::whole(holed).refine(1);
  BoxSet s = boxset_of_cells(K.cells, 3);
  REQUIRE(s.count() == BigCount(K.size()));
  REQUIRE(sorted_cells(s) == K.cells);
  // One box per chart after coalescing a full refined chart.
  REQUIRE(s.size() == size_t(holed.num_charts));
  Subcomplex back = s.materialize(holed, 100000);
  REQUIRE(back.set_equal(K));
}

TEST_CASE("materialize enforces its budget") {
  BoxSet s(3);
  s.add(chart_box(0, 3, 3));  // 19683 cells
  std::vector<CubeRef> out;
  REQUIRE(!s.enumerate(out, 100));
  CubicalComplex cx = single_chart(3);
  REQUIRE_THROWS_AS(s.materialize(cx, 100), VerificationError);
  REQUIRE(s.materialize(cx, 100000).size() == 19683);
}
