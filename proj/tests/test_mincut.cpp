#include <random>

#include "doctest.h"
#include "fraclab/mincut.hpp"
#include "fraclab/perimeter.hpp"

using namespace fraclab;

namespace {

ShapeSpec random_exterior(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  RectUnion r;
  for (int k = 0; k < 4; ++k) {
    const double x0 = u(rng), y0 = u(rng);
    r.boxes.push_back({{x0, y0}, {x0 + 0.3 + std::abs(u(rng)), y0 + 0.3 + std::abs(u(rng))}});
  }
  return ShapeSpec{r};
}

// Plain enumeration of every labelling.
double enumerate_min(const CutProblem& p, Mask& best) {
  const std::size_t n = p.window.cells();
  double lo = INFINITY;
  Mask m(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    for (std::size_t a = 0; a < n; ++a) m[a] = (bits >> a) & 1;
    const double v = p.objective(m);
    if (v < lo) {
      lo = v;
      best = m;
    }
  }
  return lo;
}

}  // namespace

TEST_CASE("max-flow matches exhaustive enumeration on 4x4 windows") {
  std::mt19937_64 rng(11);
  const Window w = Window::square(0.5, 0.25);
  for (int trial = 0; trial < 3; ++trial) {
    const CutProblem p = build_problem(random_exterior(rng), w, 0.3, 1.5);
    Mask best;
    const double lo = enumerate_min(p, best);
    const MinimizeResult r = minimize_exact(p);
    CHECK(r.objective == doctest::Approx(lo).epsilon(1e-12));
    CHECK(p.objective(r.mask) == doctest::Approx(lo).epsilon(1e-12));
    CHECK(r.certificate_gap < 1e-9);
    CHECK(r.tie_break == "out");

    const MinimizeResult f = flip_descent(p, r.mask, 3);
    CHECK(f.mask == r.mask);
    const MinimizeResult g = flip_descent(p, Mask(w.cells(), 1), 5);
    CHECK(g.objective >= lo - 1e-12);
    for (std::size_t k = 1; k < g.trace.size(); ++k) CHECK(g.trace[k] < g.trace[k - 1]);
  }
}

TEST_CASE("objective equals the perimeter plus a constant") {
  const Window w = Window::square(0.5, 0.125);
  const ShapeSpec ext{Cone2D{{0.05, -0.1}, 0.4, 2.0}};
  const CutProblem p = build_problem(ext, w, 0.25, 1.5);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 3; ++trial) {
    GridSet g = rasterize(ext, w);
    if (trial)
      for (auto& c : g.mask) c = rng() & 1;
    const double per = frac_perimeter(g, p.table).total;
    CHECK(p.objective(g.mask) == doctest::Approx(per + p.constant).epsilon(1e-9));
  }
}

TEST_CASE("pair terms are submodular") {
  const Window w = Window::square(0.5, 0.125);
  const CutProblem p = build_problem(ShapeSpec{CrossCone{}}, w, 0.3, 1.5);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Mask m(w.cells());
    for (auto& c : m) c = rng() & 1;
    const std::size_t a = rng() % m.size(), b = rng() % m.size();
    if (a == b) continue;
    auto with = [&](int la, int lb) {
      Mask x = m;
      x[a] = la;
      x[b] = lb;
      return p.objective(x);
    };
    CHECK(with(0, 0) + with(1, 1) <= with(0, 1) + with(1, 0) + 1e-12);
  }
}

TEST_CASE("unary terms") {
  const Window w = Window::square(0.5, 0.125);
  const CutProblem hp = build_problem(ShapeSpec{HalfPlane{}}, w, 0.25, 1.5);
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) {
      const std::size_t a = w.index(i, j), b = w.index(w.nx() - 1 - i, j);
      CHECK(hp.cost_in[a] == doctest::Approx(hp.cost_in[b]).epsilon(1e-12));
      CHECK(hp.cost_out[a] == doctest::Approx(hp.cost_out[b]).epsilon(1e-12));
    }

  const CutProblem empty = build_problem(ShapeSpec{Empty{}}, w, 0.25, 1.5);
  for (std::size_t a = 0; a < w.cells(); ++a) {
    CHECK(empty.cost_out[a] == 0.0);
    CHECK(empty.cost_in[a] > 0.0);
  }
  const MinimizeResult r = minimize_exact(empty);
  for (auto c : r.mask) CHECK(c == 0);
}

TEST_CASE("half-plane data is its own minimizer; complement data gives the complement") {
  const Window w = Window::square(1.0, 0.125);
  const ShapeSpec hp{HalfPlane{}};
  const GridSet target = rasterize(hp, w);
  for (double s : {0.1, 0.25, 0.4}) {
    const MinimizeResult r = minimize_exact(build_problem(hp, w, s, 2.0));
    CHECK(r.mask == target.mask);
  }
  const ShapeSpec ext{Ball{{0.1, 0.2}, 0.8}};
  const MinimizeResult a = minimize_exact(build_problem(ext, w, 0.3, 2.0));
  const MinimizeResult b = minimize_exact(build_problem(complement_of(ext), w, 0.3, 2.0));
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  for (std::size_t k = 0; k < a.mask.size(); ++k) CHECK(a.mask[k] + b.mask[k] == 1);
}

TEST_CASE("strip data stays near the half-plane") {
  const Window w = Window::square(1.0, 0.125);
  const double d = 0.3;
  // Exterior data: lower half-plane with bumps confined to |x2| <= d.
  const ShapeSpec ext{RectUnion{{Box{{-50, -50}, {50, 0}}, Box{{-50, 0}, {-0.4, d}},
                                 Box{{0.5, -d}, {50, 0.001}}}}};
  const MinimizeResult r = minimize_exact(build_problem(ext, w, 0.25, 2.0));
  const GridSet hp = rasterize(ShapeSpec{HalfPlane{}}, w);
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i)
      if (r.mask[w.index(i, j)] != hp.mask[w.index(i, j)])
        CHECK(std::abs(w.center(i, j).y) <= d + w.h());
}

TEST_CASE("size cap") {
  const CutProblem p = build_problem(ShapeSpec{HalfPlane{}}, Window::square(0.5, 0.125), 0.25, 1.0);
  CHECK_THROWS_AS(minimize_exact(p, 10), Error);
}
