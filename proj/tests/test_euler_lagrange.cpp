#include "doctest.h"
#include "fraclab/euler_lagrange.hpp"

using namespace fraclab;

TEST_CASE("half-plane and cross cone are balanced") {
  const ShapeSpec hp{HalfPlane{}};
  for (double s : {0.1, 0.25, 0.4, 0.7})
    CHECK(std::abs(el_integral(hp, {0.3, 0.0}, s, 1e-3, 8.0).value) < 1e-10);
  CHECK(std::abs(el_integral(ShapeSpec{CrossCone{}}, {}, 0.25, 1e-3, 8.0).value) < 1e-10);

  std::vector<Vec2> pts;
  for (int k = -2; k <= 2; ++k) pts.push_back({0.4 * k, 0.0});
  for (const ELValue& v : el_profile(hp, pts, 0.25, 1e-3, 8.0)) CHECK(std::abs(v.value) < 1e-10);
}

TEST_CASE("flipped square tips the balance") {
  const ShapeSpec kp{CrossConePlusSquare{0.1}};
  for (double s : {0.1, 0.25, 0.4}) {
    const ELValue v = el_integral(kp, {}, s, 1e-3, 8.0);
    CHECK(v.value > 0);
    ELOptions fine;
    fine.radii_per_decade = 128;
    fine.angles = 512;
    const ELValue f = el_integral(kp, {}, s, 5e-4, 8.0, fine);
    CHECK(f.value > 0);
  }
}

TEST_CASE("convex set: complement dominates") {
  CHECK(el_integral(ShapeSpec{Ball{{}, 1.0}}, {1.0, 0.0}, 0.25, 1e-3, 8.0).value < 0);
}

TEST_CASE("complement negates, quarter turns preserve") {
  const ShapeSpec kp{CrossConePlusSquare{0.1}};
  const ELValue v = el_integral(kp, {}, 0.3, 1e-3, 8.0);
  CHECK(el_integral(complement_of(kp), {}, 0.3, 1e-3, 8.0).value == -v.value);
  const ShapeSpec steps{RectUnion{{Box{{0, 0}, {1, 2}}, Box{{-1.5, -0.5}, {0, 0}}}}};
  const double st = el_integral(steps, {}, 0.3, 1e-3, 8.0).value;
  for (int t = 1; t < 4; ++t)
    CHECK(el_integral(rotate_quarter(steps, t), {}, 0.3, 1e-3, 8.0).value ==
          doctest::Approx(st).epsilon(1e-10));

  const ShapeSpec ball{Ball{{0.2, -0.1}, 0.7}};
  const Vec2 x0{0.9, -0.1};
  const double b = el_integral(ball, x0, 0.3, 1e-3, 8.0).value;
  CHECK(el_integral(rotate_quarter(ball, 1), rotate_quarter(x0, 1), 0.3, 1e-3, 8.0).value ==
        doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("error estimate and input checks") {
  ELOptions opt;
  opt.refine_estimate = true;
  const ELValue v = el_integral(ShapeSpec{Ball{{}, 1.0}}, {1.0, 0.0}, 0.25, 1e-3, 8.0, opt);
  CHECK(v.error >= 0);
  CHECK(v.value == doctest::Approx(v.annulus + v.far));
  CHECK_THROWS_AS(el_integral(ShapeSpec{HalfPlane{}}, {0.0, -2.0}, 0.25, 1e-3, 8.0), Error);
  CHECK_THROWS_AS(el_integral(ShapeSpec{HalfPlane{}}, {}, 0.25, 9.0, 8.0), Error);
}
