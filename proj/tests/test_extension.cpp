#include <random>

#include "doctest.h"
#include "fraclab/extension.hpp"

using namespace fraclab;

namespace {

double gamma_constant(int n, double s) {
  return std::tgamma(n / 2.0 + s) / (std::pow(kPi, n / 2.0) * std::tgamma(s));
}

HalfSpaceField random_half_space(const Window& w, const std::vector<double>& levels,
                                 std::mt19937_64& rng) {
  HalfSpaceField f = make_half_space(w, levels, ShapeSpec{Empty{}});
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& x : f.values) x = u(rng);
  return f;
}

}  // namespace

TEST_CASE("kernel normalization") {
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      const ExtensionKernel k = normalize_kernel(n, s);
      CHECK(k.c > 0);
      CHECK(k.c == doctest::Approx(gamma_constant(n, s)).epsilon(1e-10));
      CHECK(kernel_mass(k, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(kernel_mass(k, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
      for (double lam : {0.5, 3.0})
        CHECK(k(lam * 0.7, lam * 1.3) ==
              doctest::Approx(std::pow(lam, -n) * k(0.7, 1.3)).epsilon(1e-13));
    }
  const ExtensionKernel p = normalize_kernel(1, 0.5);
  CHECK(p.c == doctest::Approx(1 / kPi).epsilon(1e-4));
  for (double x : {0.0, 0.4, 2.0}) CHECK(p(x, 0.8) == doctest::Approx(0.8 / (kPi * (x * x + 0.64))));
}

TEST_CASE("extension of simple traces") {
  const double h = 1.0 / 16;
  const ExtensionKernel k = normalize_kernel(2, 0.3);
  for (double t : {h / 2, 0.25, 1.0})
    for (Vec2 x : {Vec2{0, 0}, Vec2{0.3, -0.2}})
      CHECK(extend_at(ShapeSpec{Whole{}}, k, x, t, h) == doctest::Approx(1.0).epsilon(1e-6));

  const ShapeSpec hp{HalfPlane{}};
  for (double t : {h / 2, 0.3, 1.0}) {
    CHECK(std::abs(extend_at(hp, k, {0.3, 0.0}, t, h)) < 1e-6);
    double prev = 2;
    for (double y = -1; y <= 1 + 1e-12; y += 0.125) {
      const double v = extend_at(hp, k, {0.1, y}, t, h);
      const double m = extend_at(hp, k, {0.1, -y}, t, h);
      CHECK(v == doctest::Approx(-m).epsilon(1e-6).scale(1e-6));
      CHECK(v <= prev + 1e-12);  // E lies below the line
      prev = v;
    }
  }
}

TEST_CASE("maximum principle") {
  const Window w = Window::square(0.5, 0.125);
  const HalfSpaceField f = extend(ShapeSpec{Ball{{0.1, 0}, 0.3}}, normalize_kernel(2, 0.25), w, 0.5);
  for (double v : f.values) {
    CHECK(v >= -1 - 1e-6);
    CHECK(v <= 1 + 1e-6);
  }
  const auto lv = geometric_levels(0.125, 0.5);
  CHECK(lv.front() == doctest::Approx(0.0625));
  CHECK(lv.back() == 0.5);
  CHECK(f.levels == lv);
}

TEST_CASE("weighted energy") {
  const Window w = Window::square(0.5, 0.125);
  const auto levels = geometric_levels(0.125, 1.0);
  HalfSpaceField f = make_half_space(w, levels, ShapeSpec{Empty{}});
  for (double& v : f.values) v = 0.7;
  CHECK(weighted_energy(f, 0.3) == 0.0);

  const double m = 1.7;
  for (std::size_t k = 0; k < levels.size(); ++k)
    for (int j = 0; j < w.ny(); ++j)
      for (int i = 0; i < w.nx(); ++i) f.values[f.index(i, j, k)] = m * w.center(i, j).x;
  const double vol = (w.nx() - 1) * w.h() * (w.ny() - 1) * w.h() * (levels.back() - levels.front());
  CHECK(weighted_energy(f, 0.5) == doctest::Approx(m * m * vol).epsilon(2e-2));

  std::mt19937_64 rng(5);
  const HalfSpaceField r = random_half_space(w, levels, rng);
  const SubBox full = full_box(r);
  SubBox a = full, b = full, c = full;
  a.i1 = 3;
  b.i0 = 3;
  b.k1 = 4;
  c.i0 = 3;
  c.k0 = 4;
  CHECK(weighted_energy(r, 0.3) ==
        doctest::Approx(weighted_energy(r, 0.3, a) + weighted_energy(r, 0.3, b) +
                        weighted_energy(r, 0.3, c))
            .epsilon(1e-12));
}

TEST_CASE("half-plane energy is invariant along the interface") {
  const Window w = Window::square(1.0, 0.125);
  const HalfSpaceField f = extend(ShapeSpec{HalfPlane{}}, normalize_kernel(2, 0.3), w, 0.5);
  SubBox a = full_box(f), b = a;
  a.i0 = 2;
  a.i1 = 8;
  b.i0 = 6;
  b.i1 = 12;
  CHECK(weighted_energy(f, 0.3, a) == doctest::Approx(weighted_energy(f, 0.3, b)).epsilon(1e-2));
}

TEST_CASE("min/max slack") {
  std::mt19937_64 rng(17);
  const Window w = Window::square(0.5, 0.25);
  const auto levels = geometric_levels(0.25, 1.0);
  bool positive = false;
  for (int trial = 0; trial < 100; ++trial) {
    const HalfSpaceField u = random_half_space(w, levels, rng);
    HalfSpaceField v = random_half_space(w, levels, rng);
    const MinMaxCheck c = minmax_identity_check(u, v, 0.3);
    CHECK(c.slack >= -1e-12);
    CHECK(c.sum - c.minmax == doctest::Approx(c.slack).epsilon(1e-9).scale(1e-9));
    if (c.slack > 0) positive = true;
    for (std::size_t a = 0; a < v.values.size(); ++a) v.values[a] = u.values[a] + 0.5;
    CHECK(minmax_identity_check(u, v, 0.3).slack == 0.0);
    CHECK(minmax_identity_check(u, u, 0.3).slack == 0.0);
  }
  CHECK(positive);

  const Window g = Window::square(0.5, 0.125);
  std::uniform_real_distribution<double> d(-1, 1);
  ScalarField a{g, std::vector<double>(g.cells())}, b = a;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    a.values[k] = d(rng);
    b.values[k] = d(rng);
  }
  CHECK(minmax_identity_check(a, b, 0.25, 1.0).slack > 0);
  ScalarField up = a;
  for (double& x : up.values) x += 0.1;
  CHECK(minmax_identity_check(a, up, 0.25, 1.0).slack == 0.0);
}

TEST_CASE("translated competitor gap decays") {
  const GapFit fit = competitor_gap_fit(0.25, {8, 16, 32});
  REQUIRE(fit.gaps.size() == 3);
  CHECK(fit.gaps[0] > fit.gaps[1]);
  CHECK(fit.gaps[1] > fit.gaps[2]);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
  CHECK_THROWS_AS(translated_competitor_gap(0.6, 8.0), Error);
}
