#include <random>

#include "doctest.h"
#include "fraclab/allen_cahn.hpp"
#include "fraclab/perimeter.hpp"

using namespace fraclab;

namespace {

std::vector<double> random_field(std::size_t n, std::uint64_t seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("double well") {
  CHECK(double_well(1.0) == 0.0);
  CHECK(double_well(-1.0) == 0.0);
  CHECK(double_well(0.0) == 0.25);
  CHECK(double_well_prime(0.0) == 0.0);
  CHECK(double_well_prime(0.5) == doctest::Approx(-0.375));
  const double d = 1e-4;
  for (double t = -1.0; t <= 1.0; t += 0.125)
    CHECK(std::abs(double_well_prime(t) - (double_well(t + d) - double_well(t - d)) / (2 * d)) <=
          d * d);
}

TEST_CASE("branch multipliers") {
  Multipliers m = branch_multipliers(0.25, 0.1);
  CHECK(m.branch == Branch::Below);
  CHECK(m.kinetic == 1.0);
  CHECK(m.potential == doctest::Approx(std::pow(10.0, 0.5)));
  m = branch_multipliers(0.5, std::exp(-1.0));
  CHECK(m.branch == Branch::Half);
  CHECK(m.kinetic == doctest::Approx(1.0));
  CHECK(m.potential == doctest::Approx(std::exp(1.0)));
  m = branch_multipliers(0.75, 0.1);
  CHECK(m.branch == Branch::Above);
  CHECK(m.kinetic == doctest::Approx(std::pow(10.0, -0.5)));
  CHECK(m.potential == doctest::Approx(10.0));
  CHECK_THROWS_AS(branch_multipliers(0.25, 1.5), Error);
  CHECK_THROWS_AS(branch_multipliers(1.0, 0.1), Error);
}

TEST_CASE("constant field with full exterior has zero energy") {
  const Window w = Window::square(0.5, 0.125);
  const PhaseField u = constant_field(1.0, ShapeSpec{Whole{}}, w);
  const EnergyBreakdown e = energy_G(u, 0.3, 1.5);
  CHECK(std::abs(e.total) < 1e-12);
  for (double r : frac_laplacian_residual(u, 0.3, 1.5)) CHECK(std::abs(r) < 1e-10);
  const PhaseField z = constant_field(0.0, ShapeSpec{Whole{}}, w);
  for (double r : frac_laplacian_residual(z, 0.3, 1.5)) CHECK(std::isfinite(r));
}

TEST_CASE("binary field energy against the perimeter") {
  const Window w = Window::square(1.0, 0.125);
  const double rt = 3.0;
  for (const ShapeSpec& sp : {ShapeSpec{Ball{{0.1, 0.0}, 0.5}}, ShapeSpec{CrossCone{}}}) {
    const EnergyBreakdown e = energy_G(binary_field(sp, w), 0.3, rt);
    CHECK(e.potential == 0.0);
    const double per = frac_perimeter(rasterize(sp, w), 0.3, rt).total;
    // Kinetic term counts each unordered pair once with |(+1)-(-1)|^2 = 4.
    CHECK(e.kinetic == doctest::Approx(4 * per).epsilon(1e-8));
  }
}

TEST_CASE("analytic gradient against central differences") {
  const Window w = Window::square(0.5, 0.125);
  const AllenCahnModel model(w, ShapeSpec{HalfPlane{{0.3, 0.95}, 0.05}}, 0.3, 1.5);
  const Multipliers m = branch_multipliers(0.3, 0.1);
  const std::vector<double> u = random_field(w.cells(), 9, 0.9);
  auto f = [&](const std::vector<double>& v) {
    const EnergyBreakdown e = model.energy(v);
    return m.kinetic * e.kinetic + m.potential * e.potential;
  };
  std::vector<double> g, g2;
  model.gradient(u, m.kinetic, m.potential, g);
  const double val = model.value_and_gradient(u, m.kinetic, m.potential, g2);
  CHECK(val == doctest::Approx(f(u)).epsilon(1e-12));
  const double d = 1e-5;
  for (std::size_t a = 0; a < u.size(); ++a) {
    std::vector<double> up = u, dn = u;
    up[a] += d;
    dn[a] -= d;
    const double fd = (f(up) - f(dn)) / (2 * d);
    CHECK(g[a] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
    CHECK(g2[a] == doctest::Approx(g[a]).epsilon(1e-10));
  }
}

TEST_CASE("clamping and reflection") {
  const Window w = Window::square(0.5, 0.125);
  const ShapeSpec hp{HalfPlane{}};
  const AllenCahnModel model(w, hp, 0.3, 1.5);
  std::vector<double> u = random_field(w.cells(), 3, 1.6);
  std::vector<double> c = u;
  for (double& x : c) x = std::clamp(x, -1.0, 1.0);
  CHECK(model.energy(c, 0.1).total <= model.energy(u, 0.1).total);

  std::vector<double> r(u.size());
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) r[w.index(w.nx() - 1 - i, j)] = u[w.index(i, j)];
  CHECK(model.energy(r, 0.1).total == doctest::Approx(model.energy(u, 0.1).total).epsilon(1e-10));
}

TEST_CASE("rescale") {
  const Window w = Window::square(1.0, 0.125);
  const PhaseField hp = binary_field(ShapeSpec{HalfPlane{}}, w);
  CHECK(rescale(hp, 0.3).values == hp.values);
  const PhaseField b = binary_field(ShapeSpec{Ball{{0.2, 0}, 0.6}}, w);
  CHECK(rescale(b, 1.0).values == b.values);
  const PhaseField twice = rescale(rescale(b, 0.5), 0.8);
  const PhaseField once = rescale(b, 0.4);
  for (Vec2 p : {Vec2{0.1, 0.1}, Vec2{0.3, -0.05}, Vec2{2, 0}})
    CHECK(twice.exterior.contains(p) == once.exterior.contains(p));
}

TEST_CASE("one-dimensional minimizer is monotone") {
  const Window w = Window::interval(-1.0, 1.0, 1.0 / 32);
  const ShapeSpec ext = parse_shape("halfplane:nx=-1,ny=0,dim=1");
  PhaseField u0 = constant_field(0.0, ext, w);
  for (int i = 0; i < w.nx(); ++i) u0.values[i] = w.center(i, 0).x < 0 ? -0.5 : 0.5;
  const DescentResult r = minimize_G(u0, 0.3, 0.1);
  for (std::size_t k = 1; k < r.energies.size(); ++k) CHECK(r.energies[k] <= r.energies[k - 1]);
  CHECK(r.energies.back() < r.energies.front());
  const auto& v = r.field.values;
  for (int i = 1; i < w.nx(); ++i) CHECK(v[i] >= v[i - 1] - 1e-9);
  const double mid = 0.5 * (v[w.nx() / 2 - 1] + v[w.nx() / 2]);
  CHECK(std::abs(mid) < 0.3);

  // Non-monotone perturbations do not improve the energy.
  const AllenCahnModel model(w, ext, 0.3, 0.0);
  const double best = model.energy(v, 0.1).total;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p = v;
    const std::size_t a = rng() % (p.size() - 1);
    std::swap(p[a], p[a + 1]);
    p[a] += 0.05;
    CHECK(model.energy(p, 0.1).total >= best - 1e-12);
  }
}

TEST_CASE("density ratio of the full phase") {
  const Window w = Window::square(1.0, 1.0 / 32);
  const PhaseField u = constant_field(1.0, ShapeSpec{Whole{}}, w);
  const DensityReport d = interface_and_density(u, 0.1, 0.1, {0.25, 0.5});
  REQUIRE(d.rows.size() == 2);
  for (const DensityRow& row : d.rows) CHECK(row.ratio == doctest::Approx(kPi).epsilon(3e-2));
}
