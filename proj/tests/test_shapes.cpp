#include <sstream>

#include "doctest.h"
#include "fraclab/shapes.hpp"

using namespace fraclab;

namespace {

// Share of the radial tail beyond 1 for an angular sector: the radial factor
// 2s * int_1^inf rho^{-1-2s} d rho, integrated in v = log(rho) over 40 e-folds.
double sector_tail_share(double theta, double s) {
  const double radial = gauss_integrate(
      [s](double v) { return 2 * s * std::exp(-2 * s * v); }, 0.0, 20 / s, 64);
  return radial * theta / (2 * kPi);
}

}  // namespace

TEST_CASE("rasterize samples cell centres") {
  const Window w = Window::square(1.0, 0.5);
  const GridSet g = rasterize(ShapeSpec{HalfPlane{}}, w);
  REQUIRE(w.nx() == 4);
  REQUIRE(w.ny() == 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) CHECK(g.mask[w.index(i, j)] == (j < 2 ? 1 : 0));
  CHECK(g.popcount() == 8);

  CHECK(rasterize(ShapeSpec{Ball{{}, 10.0}}, w).popcount() == 16);
  CHECK(rasterize(ShapeSpec{CrossCone{}}, Window::square(1.0, 1.0)).popcount() == 2);
}

TEST_CASE("lattice cells outside the window follow the exterior") {
  const Window w = Window::square(0.5, 0.25);
  const GridSet g = rasterize(ShapeSpec{HalfPlane{}}, w);
  CHECK(g.at(0, -5));
  CHECK_FALSE(g.at(0, 9));
  CHECK(g.at(-7, 1));
}

TEST_CASE("rasterize is monotone under inclusion") {
  const Window w = Window::square(1.0, 1.0 / 16);
  const GridSet a = rasterize(ShapeSpec{Ball{{}, 0.3}}, w);
  const GridSet b = rasterize(ShapeSpec{Ball{{}, 0.6}}, w);
  for (std::size_t k = 0; k < a.mask.size(); ++k) CHECK(a.mask[k] <= b.mask[k]);
}

TEST_CASE("grid measure converges at first order") {
  // Centre sampling misclassifies only cells within h of the boundary.
  const Box box{{-0.31, -0.207}, {0.377, 0.441}};
  const double area = 0.687 * 0.648, per = 2 * (0.687 + 0.648);
  for (double h : {1.0 / 16, 1.0 / 64}) {
    const Window w = Window::square(1.0, h);
    CHECK(std::abs(rasterize(ShapeSpec{Ball{{0.013, -0.021}, 0.5}}, w).popcount() * h * h -
                   kPi / 4) <= kPi * h);
    CHECK(std::abs(rasterize(ShapeSpec{RectUnion{{box}}}, w).popcount() * h * h - area) <=
          per * h);
  }
}

TEST_CASE("asymptotic densities") {
  CHECK(asymptotic_density(ShapeSpec{HalfPlane{}}).value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(asymptotic_density(ShapeSpec{Ball{{3, -2}, 7}}).value() == 0.0);
  CHECK(asymptotic_density(ShapeSpec{Whole{}}).value() == 1.0);

  Cone2D c;
  c.opening = kPi / 3;
  const double d = asymptotic_density(ShapeSpec{c}).value();
  CHECK(d == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(d == doctest::Approx(sector_tail_share(kPi / 3, 1e-3)).epsilon(1e-9));
  CHECK(asymptotic_density(complement_of(ShapeSpec{c})).value() ==
        doctest::Approx(1 - 1.0 / 6).epsilon(1e-14));

  const Density osc = asymptotic_density(ShapeSpec{OscillatingCone{}});
  CHECK_FALSE(osc.defined());
  CHECK(osc.lo < osc.hi);
}

TEST_CASE("exact local quantities") {
  auto q = exact_local_quantities(ShapeSpec{HalfPlane{}}, 1.0);
  CHECK(q.perimeter_in_Br == doctest::Approx(2.0));
  CHECK(q.measure_E_in_Br == doctest::Approx(kPi / 2));
  CHECK(q.measure_complement_in_Br == doctest::Approx(kPi / 2));

  q = exact_local_quantities(ShapeSpec{CrossCone{}}, 1.0);
  CHECK(q.perimeter_in_Br == doctest::Approx(4.0));
  CHECK(q.measure_E_in_Br == doctest::Approx(kPi / 2));

  q = exact_local_quantities(ShapeSpec{Ball{{}, 0.5}}, 1.0);
  CHECK(q.perimeter_in_Br == doctest::Approx(kPi));
  CHECK(q.measure_E_in_Br == doctest::Approx(kPi / 4));
  CHECK(q.measure_complement_in_Br == doctest::Approx(3 * kPi / 4));

  CHECK_THROWS_AS(exact_local_quantities(ShapeSpec{RectUnion{{Box{{0, 0}, {1, 1}}}}}, 1.0), Error);
}

TEST_CASE("sphere fraction and far occupancy") {
  const ShapeSpec hp{HalfPlane{}};
  CHECK(sphere_fraction(hp, {0.3, 0.0}, 2.0) == doctest::Approx(0.5));
  CHECK(sphere_fraction(hp, {0.0, -5.0}, 1.0) == 1.0);
  CHECK(occupancy_beyond(hp, {0.2, 0.0}, 1.0, 0.25) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(occupancy_beyond(ShapeSpec{Empty{}}, {}, 1.0, 0.25) == 0.0);
  CHECK(occupancy_beyond(ShapeSpec{Whole{}}, {}, 1.0, 0.25) == doctest::Approx(1.0));
}

TEST_CASE("complement and quarter rotations") {
  const ShapeSpec c{CrossCone{}};
  const ShapeSpec r = rotate_quarter(c, 1);
  for (Vec2 p : {Vec2{0.3, 0.7}, Vec2{-0.2, 0.4}, Vec2{-1, -2}}) {
    CHECK(complement_of(c).contains(p) == !c.contains(p));
    CHECK(r.contains(rotate_quarter(p, 1)) == c.contains(p));
  }
}

TEST_CASE("shape grammar round trip") {
  for (const char* text : {"halfplane:nx=0,ny=1,c=0.25", "ball:r=0.5,cx=0.1,cy=0",
                           "cone:opening=1.5,bisector=0.5,ax=0,ay=0", "crosscone",
                           "crosscone+sq:l=0.125", "rect:box=0/0/1/1,box=-1/-1/0/0"}) {
    const ShapeSpec s = parse_shape(text);
    CHECK(format_shape(parse_shape(format_shape(s))) == format_shape(s));
  }
  CHECK(parse_shape("ball:r=2,complement=1").complement);
  CHECK(parse_shape("halfplane:dim=1").dimension == 1);
  CHECK_THROWS_AS(parse_shape("ball:radius=2"), Error);
  CHECK_THROWS_AS(parse_shape("triangle"), Error);
}

TEST_CASE("pgm output") {
  std::ostringstream os;
  write_pgm(os, rasterize(ShapeSpec{HalfPlane{}}, Window::square(1.0, 0.5)));
  CHECK(os.str() == "P2\n4 4\n1\n0 0 0 0\n0 0 0 0\n1 1 1 1\n1 1 1 1\n");
}
