#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "fraclab/kernel.hpp"

using namespace fraclab;

namespace {

// Unit cells at offset (1,0) in the plane. The pair integral equals the
// integral of the overlap tent T(z) = (1-|z1-1|)(1-|z2|) against |z|^{-p};
// in polar coordinates about the singular corner the radial part is a sum of
// powers and is integrated in closed form, the angle by Gauss on smooth pieces.
double adjacent_pair_2d(double s) {
  const double q = -1 - 2 * s;  // rho^{1-p}
  auto prim = [q](double k, double rho) { return std::pow(rho, k + q + 1) / (k + q + 1); };
  auto radial = [&](double phi) {
    const double c = std::cos(phi), sn = std::sin(phi);
    const double end = sn > 0 ? std::min(2 / c, 1 / sn) : 2 / c;
    const double mid = std::min(1 / c, end);
    // z1 <= 1: T = c rho - c sn rho^2
    double v = c * prim(1, mid) - c * sn * prim(2, mid);
    if (end > mid) {
      // z1 >= 1: T = 2 - (2 sn + c) rho + c sn rho^2
      v += 2 * (prim(0, end) - prim(0, mid)) - (2 * sn + c) * (prim(1, end) - prim(1, mid)) +
           c * sn * (prim(2, end) - prim(2, mid));
    }
    return v;
  };
  const double a = std::atan(0.5), b = kPi / 4, e = kPi / 2;
  return 2 * (gauss_integrate(radial, 0, a, 64) + gauss_integrate(radial, a, b, 64) +
              gauss_integrate(radial, b, e, 64));
}

// Unit intervals at integer distance d >= 1 on the line.
double pair_1d(int d, double s) {
  const double p = 1 + 2 * s;
  auto prim = [p](double alpha, double beta, double z) {
    return alpha * std::pow(z, 1 - p) / (1 - p) + beta * std::pow(z, 2 - p) / (2 - p);
  };
  double v = 0;
  if (d == 1)
    v += 1 / (2 - p);
  else
    v += prim(1 - d, 1, d) - prim(1 - d, 1, d - 1);
  v += prim(d + 1, -1, d + 1) - prim(d + 1, -1, d);
  return v;
}

}  // namespace

TEST_CASE("constants") {
  const KernelConstants k = kernel_constants(2, 0.3);
  CHECK(k.omega == 2 * kPi);
  CHECK(k.c_n == k.omega);
}

TEST_CASE("far field pair weight is the midpoint value") {
  CHECK(pair_weight(10, 0, 1.0, 0.25, 2) == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-6));
  for (int d : {4, 5, 9})
    CHECK(pair_weight(d, 3, 1.0, 0.3, 2) ==
          doctest::Approx(std::pow(d * d + 9.0, -1.3)).epsilon(1e-6));
}

TEST_CASE("adjacent cells against the polar oracle") {
  for (double s : {0.1, 0.25, 0.4}) {
    const double oracle = adjacent_pair_2d(s);
    CHECK(pair_weight(1, 0, 1.0, s, 2) == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(pair_weight(0, -1, 1.0, s, 2) == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("one-dimensional near field against the closed form") {
  for (double s : {0.05, 0.25, 0.45})
    for (int d : {1, 2, 3})
      CHECK(pair_weight(d, 0, 1.0, s, 1) == doctest::Approx(pair_1d(d, s)).epsilon(1e-9));
}

TEST_CASE("scaling law and symmetry") {
  for (double h : {0.5, 1.0 / 32}) {
    for (auto [di, dj] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{3, 3}, std::pair{7, -2}}) {
      const double w = pair_weight(di, dj, h, 0.3, 2);
      CHECK(w == doctest::Approx(std::pow(h, 2 - 0.6) * pair_weight(di, dj, 1.0, 0.3, 2))
                     .epsilon(1e-12));
      CHECK(w == pair_weight(-di, -dj, h, 0.3, 2));
      CHECK(w == pair_weight(dj, di, h, 0.3, 2));
    }
  }
  CHECK_THROWS_AS(pair_weight(0, 0, 1.0, 0.25, 2), Error);
}

TEST_CASE("tail values") {
  CHECK(tail(1.0, 0.25, 2) == doctest::Approx(4 * kPi));
  CHECK(tail(2.0, 0.5, 2) == doctest::Approx(kPi));
  const double s = 1e-6;
  CHECK(2 * s * tail(1.0, s, 2) / (2 * kPi) == doctest::Approx(1.0));
  for (double s2 : {0.1, 0.3}) {
    // rho = R e^v; the exponential is cut after 40 e-folds
    const double R = 1.7;
    const double quad =
        2 * kPi * std::pow(R, -2 * s2) *
        gauss_integrate([s2](double v) { return std::exp(-2 * s2 * v); }, 0, 20 / s2, 64);
    CHECK(tail(R, s2, 2) == doctest::Approx(quad).epsilon(1e-9));
  }
}

TEST_CASE("table covers the truncation disk") {
  const Window w = Window::square(0.5, 1.0 / 32);
  REQUIRE(w.nx() == 32);
  const InteractionTable t = build_table(w, 0.25, 2.0);
  std::size_t expected = 0;
  for (int dj = -64; dj <= 64; ++dj)
    for (int di = -64; di <= 64; ++di)
      if ((di || dj) && di * di + dj * dj <= 64 * 64) ++expected;
  CHECK(t.offsets.size() == expected);
  CHECK(t.weight(64, 0) > 0);
  CHECK(t.weight(46, 46) == 0);
  for (auto [di, dj] : {std::pair{1, 0}, std::pair{3, 2}, std::pair{-40, 17}})
    CHECK(t.weight(di, dj) == pair_weight(di, dj, w.h(), 0.25, 2));
  CHECK(t.tau == tail(2.0, 0.25, 2));

  const InteractionTable again = build_table(w, 0.25, 2.0);
  CHECK(again.dense == t.dense);
}

TEST_CASE("weights decrease in s beyond unit separation") {
  const double h = 1.0 / 8;
  const InteractionTable lo = build_table(2, h, 0.01, 2.5);
  const InteractionTable hi = build_table(2, h, 0.49, 2.5);
  int checked = 0;
  for (const Offset& o : lo.offsets) {
    if (h * std::hypot(o.di, o.dj) <= 1.0) continue;
    CHECK(hi.weight(o.di, o.dj) < o.w);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("truncated sums plus tail reproduce the inner tail") {
  const double r = 0.5, R = 2.0, h = 1.0 / 16, s = 0.3;
  const InteractionTable t = build_table(2, h, s, R);
  KahanSum sum;
  for (const Offset& o : t.offsets) {
    const double d = h * std::hypot(o.di, o.dj);
    if (d > r && d <= R) sum += o.w / (h * h);
  }
  CHECK(sum.value() + tail(R, s, 2) == doctest::Approx(tail(r, s, 2)).epsilon(2e-2));
}

TEST_CASE("table cache round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "fraclab_table_test.bin").string();
  const InteractionTable t = build_table(2, 0.25, 0.2, 1.5);
  save_table(t, path);
  InteractionTable back;
  CHECK(load_table(path, 2, 0.25, 0.2, 1.5, back));
  CHECK(back.dense == t.dense);
  CHECK(back.offsets.size() == t.offsets.size());
  CHECK_FALSE(load_table(path, 2, 0.25, 0.3, 1.5, back));
  std::remove(path.c_str());
  CHECK_FALSE(load_table(path, 2, 0.25, 0.2, 1.5, back));
}
