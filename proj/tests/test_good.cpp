#include <catch2/catch_amalgamated.hpp>

#include "wada/good.hpp"

using namespace wada;

TEST_CASE("a single cube gains a 6-chart collar") {
  CubicalComplex T = grid_complex(3, {std::array<int32_t, MAXN>{0, 0, 0, 0}});
  Collared K = collar_attach(T);
  REQUIRE(K.cx.num_charts == 7);
  REQUIRE(K.first_collar_chart == 1);

  Subcomplex P = Subcomplex::whole(K.cx);
  GoodnessReport rep = validate_good(P);
  REQUIRE(rep.adjacency_connected);
  REQUIRE(rep.faces_two_sided);
  REQUIRE(rep.stars_connected);
  REQUIRE(rep.boundary_nonempty);
  REQUIRE(rep.boundary_components_adjacent);
  REQUIRE(rep.boundary_component_count == 1);
  REQUIRE(rep.good());

  // collar boundary bijection: one outer face per collar chart
  Subcomplex bd = P.boundary();
  REQUIRE(bd.size() == K.base_cells.size());
  for (const CubeRef& f : bd.cells) {
    REQUIRE(f.chart >= K.first_collar_chart);
    REQUIRE(f.point_axis(2));
    REQUIRE(f.origin[2] == 1);
  }
}

TEST_CASE("closed surface of the 3-cube has the right skeleton") {
  CubicalComplex cx = generate_closed(2);
  REQUIRE(cx.num_charts == 6);
  Subcomplex P = Subcomplex::whole(cx);
  REQUIRE(P.skeleton(0).size() == 8);
  REQUIRE(P.skeleton(1).size() == 12);
  REQUIRE(P.size() == 6);
  REQUIRE(P.boundary().empty());

  GoodnessReport rep = validate_good(P);
  REQUIRE(rep.good_interior());
  REQUIRE(!rep.boundary_nonempty);

  CyclicityReport cyc = star_cyclicity(P);
  REQUIRE(cyc.cyclic == 8);
  REQUIRE(cyc.linear == 0);
  REQUIRE(cyc.irregular == 0);
  REQUIRE(cyc.mu == 3);
}

TEST_CASE("closed boundary of the 4-cube is an 8-chart 3-complex") {
  CubicalComplex cx = generate_closed(3);
  REQUIRE(cx.num_charts == 8);
  Subcomplex P = Subcomplex::whole(cx);
  REQUIRE(P.boundary().empty());
  REQUIRE(validate_good(P).good_interior());
  // Euler characteristic of S^3 is 0: 16 - 32 + 24 - 8
  REQUIRE(P.skeleton(0).size() == 16);
  REQUIRE(P.skeleton(1).size() == 32);
  REQUIRE(P.skeleton(2).size() == 24);
}

TEST_CASE("shell generator: good, two boundary components, expected constants") {
  CubicalComplex cx = generate_shell(4);
  REQUIRE(cx.num_charts == 24);
  Subcomplex P = Subcomplex::whole(cx);
  GoodnessReport rep = validate_good(P);
  REQUIRE(rep.good());
  REQUIRE(rep.boundary_component_count == 2);

  auto comps = boundary_components(P);
  REQUIRE(comps.size() == 2);
  REQUIRE(comps[0].size() == 6);
  REQUIRE(comps[1].size() == 6);

  // the star of the boundary is the two outer layers, a product collar
  Subcomplex bd = P.boundary();
  Subcomplex st = P.star_of(bd);
  REQUIRE(st.size() == 12);

  // every shell vertex sits on a corner column: 3 faces x 2 layers
  REQUIRE(compute_mu(P) == 4);
  REQUIRE(compute_theta(P) == 6);
  REQUIRE(compute_nu_feasible(2, 4) == 6);
}

TEST_CASE("holed cube fixture: chart counts, goodness, constants") {
  Collared K = generate_holed_cube(3, 3, 2);
  REQUIRE(K.first_collar_chart == 727);
  REQUIRE(K.cx.num_charts == 727 + 498);

  Subcomplex P = Subcomplex::whole(K.cx);
  GoodnessReport rep = validate_good(P);
  REQUIRE(rep.adjacency_connected);
  REQUIRE(rep.faces_two_sided);
  REQUIRE(rep.stars_connected);
  REQUIRE(rep.boundary_nonempty);
  REQUIRE(rep.boundary_components_adjacent);
  REQUIRE(rep.boundary_component_count == 3);
  REQUIRE(rep.good());

  // each hole edge is concave: 4 grid squares plus the collar seam square;
  // a hole corner vertex meets 7 core cubes and 3 collar cubes
  REQUIRE(compute_mu(P) == 5);
  REQUIRE(compute_theta(P) == 10);
  Constants cst = compute_constants(P, 3);
  REQUIRE(cst.mu == 5);
  REQUIRE(cst.nu_paper == 14);
  REQUIRE(cst.nu_feasible == 7);
  // the core grid before the collar carries the flat-lattice values,
  // and both multiplicities select the same scales
  CubicalComplex core_cx = generate_holed_grid(3, 3, 2);
  Subcomplex core = Subcomplex::whole(core_cx);
  REQUIRE(compute_mu(core) == 4);
  REQUIRE(compute_theta(core) == 8);
  REQUIRE(compute_nu_paper(3, 4) == 14);
  REQUIRE(compute_nu_feasible(3, 4) == 7);

  // boundary bijection with the inner complex boundary
  Subcomplex bd = P.boundary();
  REQUIRE(bd.size() == K.base_cells.size());
}

TEST_CASE("holed cube is too small at r=1") {
  REQUIRE_THROWS_AS(generate_holed_cube(3, 3, 1), ConstructionError);
  try {
    generate_holed_cube(3, 3, 1);
  } catch (const ConstructionError& e) {
    REQUIRE(e.kind == "TooSmall");
  }
}

TEST_CASE("two-region holed cube has a 492-chart collar") {
  Collared K = generate_holed_cube(3, 2, 2);
  REQUIRE(K.first_collar_chart == 728);
  REQUIRE(K.cx.num_charts == 728 + 486 + 6);
  Subcomplex P = Subcomplex::whole(K.cx);
  REQUIRE(validate_good(P).boundary_component_count == 2);
}

TEST_CASE("euclidean lattice multiplicities") {
  // interior edge of a flat grid lies in 4 squares, interior vertex in 8 cubes
  std::vector<std::array<int32_t, MAXN>> cells;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) cells.push_back({x, y, z, 0});
  CubicalComplex cx = grid_complex(3, cells);
  Subcomplex P = Subcomplex::whole(cx);
  REQUIRE(compute_mu(P) == 4);
  REQUIRE(compute_theta(P) == 8);
}

TEST_CASE("feasible exponent is monotone in the region count") {
  int prev = 0;
  for (int m = 1; m <= 6; ++m) {
    int nu = compute_nu_feasible(m, 4);
    REQUIRE(nu >= prev);
    prev = nu;
  }
}

TEST_CASE("local size bound matches a brute-force count") {
  // single chart: the bound is the refined closure of one cube
  CubicalComplex one;
  one.n = 3;
  one.num_charts = 1;
  one.finalize();
  Subcomplex P1 = Subcomplex::whole(one);
  REQUIRE(compute_lambda_loc(P1, 1) == 27 + 108);

  // shell: compare the closed form against materialized counts at nu=1
  CubicalComplex cx = generate_shell(4);
  Subcomplex P = Subcomplex::whole(cx);
  int64_t best = 0;
  for (const CubeRef& q : P.cells) {
    Subcomplex onecube(P.cx ? *P.cx : cx, 3, 0);
    onecube.cells.push_back(q);
    Subcomplex N = P.star_of(onecube);
    Subcomplex RN = N.refine(1);
    best = std::max(best,
                    int64_t(RN.size()) + int64_t(RN.skeleton(2).size()));
  }
  REQUIRE(compute_lambda_loc(P, 1) == best);
}

TEST_CASE("star cyclicity of the quadrant ring") {
  CubicalComplex cx;
  cx.n = 3;
  cx.num_charts = 4;
  cx.gluings.push_back({0, 0, 1, 1, {-1, 2, 3, 4}});
  cx.gluings.push_back({1, 2, 2, 3, {1, -2, 3, 4}});
  cx.gluings.push_back({2, 1, 3, 0, {-1, 2, 3, 4}});
  cx.gluings.push_back({3, 3, 0, 2, {1, -2, 3, 4}});
  cx.finalize();
  Subcomplex P = Subcomplex::whole(cx);

  CubeRef e;  // central edge: cyclic of length 4, so Euclidean
  e.chart = 0;
  e.point_mask = 0b011;
  e.origin = {0, 0, 0, 0};
  REQUIRE(euclidean_edge_star(P, e));

  CyclicityReport cyc = star_cyclicity(P);
  REQUIRE(cyc.irregular == 0);
  REQUIRE(cyc.cyclic == 1);
  REQUIRE(cyc.mu == 4);
}
