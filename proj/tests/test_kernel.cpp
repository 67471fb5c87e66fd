#include <catch2/catch_amalgamated.hpp>

#include "wada/complex.hpp"
#include "wada/cube.hpp"
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

// Four 3-charts in a cycle around a common edge {x=0, y=0, z in [0,1]}
// (quadrants of the plane, each thickened in z).
CubicalComplex quadrant_ring() {
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = 4;
  cx.gluings.push_back({0, 0, 1, 1, {-1, 2, 3, 4}});
  cx.gluings.push_back({1, 2, 2, 3, {1, -2, 3, 4}});
  cx.gluings.push_back({2, 1, 3, 0, {-1, 2, 3, 4}});
  cx.gluings.push_back({3, 3, 0, 2, {1, -2, 3, 4}});
  cx.finalize();
  return cx;
}

}  // namespace

TEST_CASE("one refinement of an n-cube has exactly 3^n children") {
  for (int n = 2; n <= 3; ++n) {
    CubicalComplex cx = single_chart(n);
    Subcomplex K = Subcomplex::whole(cx);
    Subcomplex r1 = K.refine(1);
    REQUIRE(r1.size() == size_t(pow3(n)));
    REQUIRE(r1.level == 1);
    Subcomplex r2 = r1.refine(1);
    REQUIRE(r2.size() == size_t(pow3(2 * n)));
    Subcomplex r2direct = K.refine(2);
    REQUIRE(r2.set_equal(r2direct));
  }
}

TEST_CASE("face enumeration counts match the binomial pattern") {
  CubicalComplex cx = single_chart(3);
  CubeRef q = chart_cube(0);
  std::vector<CubeRef> fs;
  enumerate_faces(q, 3, fs);
  REQUIRE(fs.size() == 27);  // 3^n cells in the closure
  for (int d = 0; d <= 3; ++d) {
    enumerate_faces_of_dim(q, 3, d, fs);
    size_t expect = 1;
    // C(3,d) * 2^(3-d)
    int c[4] = {1, 3, 3, 1};
    expect = size_t(c[d]) << (3 - d);
    REQUIRE(fs.size() == expect);
  }
}

TEST_CASE("children and try_parent invert each other") {
  CubicalComplex cx = single_chart(3);
  CubeRef q;
  q.chart = 0;
  q.level = 1;
  q.point_mask = 0b010;
  q.origin = {1, 2, 0, 0};
  std::vector<CubeRef> kids;
  children(q, 3, kids);
  REQUIRE(kids.size() == 9);  // 3^dim, dim = 2
  for (const CubeRef& k : kids) {
    CubeRef p;
    REQUIRE(try_parent(k, 3, p));
    REQUIRE(p == q);
    REQUIRE(refines_into(k, q, 3));
  }
}

TEST_CASE("transfer across a flipped gluing maps cells consistently") {
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = 2;
  // x=1 face of chart 0 onto x=0 face of chart 1, with the y axis reversed.
  cx.gluings.push_back({0, 1, 1, 0, {-1, -2, 3, 4}});
  cx.finalize();

  CubeRef v;  // vertex (1, 0, 0) of chart 0
  v.chart = 0;
  v.level = 0;
  v.point_mask = 0b111;
  v.origin = {1, 0, 0, 0};
  CubeRef t = cx.transfer(v, 1);
  REQUIRE(t.chart == 1);
  REQUIRE(t.origin[0] == 0);
  REQUIRE(t.origin[1] == 1);
  REQUIRE(t.origin[2] == 0);
  REQUIRE(cx.canonical(t) == cx.canonical(v));

  std::vector<CubeRef> cubes;
  cx.cubes_containing(v, cubes);
  REQUIRE(cubes.size() == 2);
}

TEST_CASE("transfer commutes with refinement on glued faces") {
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = 2;
  cx.gluings.push_back({0, 1, 1, 0, {-1, -2, 3, 4}});
  cx.finalize();

  // the whole glued face of chart 0, as a 2-cell
  CubeRef f;
  f.chart = 0;
  f.level = 0;
  f.point_mask = 0b001;
  f.origin = {1, 0, 0, 0};

  std::vector<CubeRef> kids_a, kids_b;
  children(f, 3, kids_a);
  CubeRef g = cx.transfer(f, 1);
  children(g, 3, kids_b);
  REQUIRE(kids_a.size() == kids_b.size());

  std::vector<CubeRef> ca, cb;
  for (const CubeRef& k : kids_a) ca.push_back(cx.canonical(k));
  for (const CubeRef& k : kids_b) cb.push_back(cx.canonical(k));
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  REQUIRE(ca == cb);
}

TEST_CASE("gluing orbit around a 4-chart ring closes cyclically") {
  CubicalComplex cx = quadrant_ring();

  CubeRef e;  // the common edge in chart 0 coordinates
  e.chart = 0;
  e.level = 0;
  e.point_mask = 0b011;
  e.origin = {0, 0, 0, 0};

  std::vector<CubeRef> reps;
  cx.orbit(e, reps);
  REQUIRE(reps.size() == 4);

  std::vector<CubeRef> cubes;
  cx.cubes_containing(e, cubes);
  REQUIRE(cubes.size() == 4);

  // a representative in another chart canonicalizes to the same cell
  CubeRef t = cx.transfer(e, 0);
  REQUIRE(t.chart == 1);
  REQUIRE(cx.canonical(t) == cx.canonical(e));

  // refined edge cells on the seam still canonicalize consistently
  std::vector<CubeRef> kids_a, kids_b;
  children(e, 3, kids_a);
  children(t, 3, kids_b);
  std::vector<CubeRef> ca, cb;
  for (const CubeRef& k : kids_a) ca.push_back(cx.canonical(k));
  for (const CubeRef& k : kids_b) cb.push_back(cx.canonical(k));
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  REQUIRE(ca == cb);
}

TEST_CASE("gluing validation rejects malformed input") {
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = 2;
  cx.gluings.push_back({0, 1, 1, 0, {1, 2, 3, 4}});  // sign violates sides
  REQUIRE_THROWS_AS(cx.finalize(), ConstructionError);

  CubicalComplex cx2;
  cx2.n = 3;
  cx2.num_charts = 2;
  cx2.gluings.push_back({0, 1, 1, 0, {-1, 2, 3, 4}});
  cx2.gluings.push_back({0, 1, 1, 2, {-2, 1, 3, 4}});  // face 1 of chart 0 reused
  REQUIRE_THROWS_AS(cx2.finalize(), ConstructionError);
}
