#include "fraclab/lab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "fraclab/allen_cahn.hpp"
#include "fraclab/euler_lagrange.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/mincut.hpp"
#include "fraclab/perimeter.hpp"

namespace fraclab::lab {

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double meta(const SweepReport& r, const char* key) { return std::stod(r.get_meta(key)); }

struct Outcome {
  bool pass;
  std::string detail;
  bool blocking = true;
};

Outcome a1() {
  const Window w = Window::square(1.0, 1.0 / 16);
  const GridSet K = rasterize(parse_shape("crosscone"), w);
  const GridSet Kp = rasterize(parse_shape("crosscone+sq:l=0.0625"), w);
  double worst = 0;
  for (double s : {0.1, 0.25, 0.4}) {
    const double a = frac_perimeter(K, s, 3.0).total, b = frac_perimeter(Kp, s, 3.0).total;
    worst = std::max(worst, rel(b, a));
  }
  return {worst <= 1e-10, fmt("max rel diff %.3g (tol 1e-10)", worst)};
}

Outcome a2() {
  const double s = 0.25, rho0 = 1e-3, rt = 8.0;
  const ELValue k = el_integral(parse_shape("crosscone"), {0, 0}, s, rho0, rt);
  ELOptions fine;
  fine.radii_per_decade = 128;
  fine.angles = 512;
  const ShapeSpec kp = parse_shape("crosscone+sq:l=0.0625");
  const ELValue p1 = el_integral(kp, {0, 0}, s, rho0, rt);
  const ELValue p2 = el_integral(kp, {0, 0}, s, rho0, rt, fine);
  const bool ok = std::abs(k.value) <= 1e-10 && p1.value > 0 && p2.value > 0;
  return {ok, fmt("K: %.3g; K': %.6g, %.6g at two resolutions", k.value, p1.value, p2.value)};
}

Outcome a3() {
  const Window w = Window::square(1.0, 1.0 / 16);
  const ShapeSpec hp = parse_shape("halfplane");
  const Mask ras = rasterize(hp, w).mask;
  bool ok = true;
  std::string d;
  for (double s : {0.1, 0.25, 0.4}) {
    const CutProblem p = build_problem(hp, w, s, 3.0);
    const MinimizeResult r = minimize_exact(p);
    std::size_t diff = 0;
    for (std::size_t a = 0; a < ras.size(); ++a) diff += r.mask[a] != ras[a];
    ok = ok && diff == 0 && r.certificate_gap <= 1e-9;
    d += fmt("s=%.2f diff=%zu cert=%.2g; ", s, diff, r.certificate_gap);
  }
  return {ok, d};
}

Outcome a4() {
  const Window w = Window::square(1.0, 1.0 / 16);
  const ShapeSpec K = parse_shape("crosscone");
  const CutProblem p = build_problem(K, w, 0.25, 3.0);
  const MinimizeResult r = minimize_exact(p);
  const Mask ras = rasterize(K, w).mask;
  const double margin = p.objective(ras) - r.objective;
  const double bound = truncation_bound(p, r.mask, ras);
  std::size_t diff = 0;
  for (std::size_t a = 0; a < ras.size(); ++a) diff += r.mask[a] != ras[a];
  return {margin > bound && diff > 0, fmt("margin %.4g > bound %.4g, %zu cells differ", margin, bound, diff)};
}

const Window& limit_window() {
  static const Window w = Window::square(1.5, 1.0 / 32);
  return w;
}

Outcome a5() {
  const SweepReport r = scaled_limits(parse_shape("ball:r=0.5"), limit_window(), 1.0, {0.05, 0.02, 0.01},
                                      LimitMode::ToZero, 2.25);
  const double target = 2 * kPi * (kPi * 0.25);  // |S^1| * |B_{1/2}|
  const double x = meta(r, "extrapolated");
  return {rel(x, target) <= 0.05, fmt("extrapolated %.5g vs %.5g, rel %.3g", x, target, rel(x, target))};
}

Outcome a6() {
  const SweepReport r =
      scaled_limits(parse_shape("cone:opening=1.5707963267948966,bisector=0.7853981633974483"),
                    limit_window(), 1.0, {0.05, 0.02, 0.01}, LimitMode::ToZero, 2.25);
  // Quadrant: |E cap B_1| = pi/4, |B_1 \ E| = 3pi/4, far density 1/4.
  const double target = 2 * kPi * (0.75 * kPi / 4 + 0.25 * 3 * kPi / 4);
  const double x = meta(r, "extrapolated");
  return {rel(x, target) <= 0.10, fmt("extrapolated %.5g vs %.5g, rel %.3g", x, target, rel(x, target))};
}

Outcome a7() {
  const std::vector<double> sl{0.40, 0.44, 0.47, 0.49};
  const SweepReport hp = scaled_limits(parse_shape("halfplane"), limit_window(), 1.0, sl, LimitMode::ToHalf, 2.25);
  const SweepReport k = scaled_limits(parse_shape("crosscone"), limit_window(), 1.0, sl, LimitMode::ToHalf, 2.25);
  const double xh = meta(hp, "extrapolated"), xk = meta(k, "extrapolated");
  const double ratio = xk / xh;
  const double soft_target = 2 * kPi * 2;
  const bool soft = rel(xh, soft_target) <= 0.10;
  return {rel(ratio, 2.0) <= 0.05,
          fmt("ratio %.5g vs 2 (rel %.3g); soft: half-plane limit %.5g vs %.5g %s (non-blocking)", ratio,
              rel(ratio, 2.0), xh, soft_target, soft ? "PASS" : "FAIL")};
}

Outcome a8() {
  const SweepReport r = scaled_limits(parse_shape("osc"), limit_window(), 1.0, {0.2, 0.1, 0.05, 0.025, 0.0125},
                                      LimitMode::ToZero, 2.25);
  const auto v = r.column("scaled");
  const double mx = *std::max_element(v.begin(), v.end()), mn = *std::min_element(v.begin(), v.end());
  return {mx / mn >= 1.2, fmt("max/min %.4g (need >= 1.2)", mx / mn)};
}

Outcome a9() {
  const Window w = Window::square(0.5, 0.25);
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  int agree = 0, flip_ok = 0;
  double worst = 0;
  for (int trial = 0; trial < 30; ++trial) {
    RectUnion ru;
    const int boxes = 1 + static_cast<int>(rng() % 3);
    for (int b = 0; b < boxes; ++b) {
      double x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      ru.boxes.push_back({{std::min(x0, x1), std::min(y0, y1)}, {std::max(x0, x1), std::max(y0, y1)}});
    }
    ShapeSpec spec;
    spec.kind = ru;
    const CutProblem p = build_problem(spec, w, 0.3, 1.5);
    const MinimizeResult ex = minimize_exact(p), br = minimize_brute(p);
    const MinimizeResult fl = flip_descent(p, rasterize(spec, w).mask, trial + 1);
    const double scale = std::max(1.0, std::abs(br.objective));
    const double d = std::abs(ex.objective - br.objective) / scale;
    worst = std::max(worst, d);
    agree += d <= 1e-12;
    flip_ok += fl.objective >= ex.objective - 1e-12 * scale;
  }
  return {agree == 30 && flip_ok == 30,
          fmt("exact=brute in %d/30 (max rel %.2g), flip never better in %d/30", agree, worst, flip_ok)};
}

Outcome a10() {
  struct Case {
    double s, eps, k, p;
  };
  const Case cases[] = {{0.25, 0.1, 1.0, std::sqrt(10.0)},
                        {0.5, std::exp(-1.0), 1.0, std::exp(1.0)},
                        {0.75, 0.1, 1 / std::sqrt(10.0), 10.0}};
  double worst = 0;
  for (const Case& c : cases) {
    const Multipliers m = branch_multipliers(c.s, c.eps);
    worst = std::max({worst, rel(m.kinetic, c.k), rel(m.potential, c.p)});
  }
  return {worst <= 1e-12, fmt("max rel multiplier error %.2g", worst)};
}

Outcome a11() {
  const Window w = Window::square(1.0, 1.0 / 16);
  const ShapeSpec hp = parse_shape("halfplane");
  double worst = 0;
  for (auto [s, eps] : {std::pair{0.3, 0.1}, std::pair{0.75, 0.1}}) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    std::vector<double> u(w.cells());
    for (double& v : u) v = U(rng);
    const AllenCahnModel m(w, hp, s, 0.0);
    const Multipliers mu = branch_multipliers(s, eps);
    std::vector<double> g;
    m.gradient(u, mu.kinetic, mu.potential, g);
    const double delta = 1e-5;
    for (int k = 0; k < 100; ++k) {
      const std::size_t a = rng() % u.size();
      auto up = u, dn = u;
      up[a] += delta;
      dn[a] -= delta;
      const double fd = (m.energy(up, eps).total - m.energy(dn, eps).total) / (2 * delta);
      worst = std::max(worst, std::abs(fd - g[a]) / std::max(std::abs(g[a]), 1e-300));
    }
  }
  return {worst <= 1e-5, fmt("max rel gradient error %.3g over 200 cells", worst)};
}

struct GammaRun {
  double s, eps, dev, ratio25, ratio50;
  bool monotone;
};

const std::vector<GammaRun>& gamma_runs() {
  static const std::vector<GammaRun> runs = [] {
    std::vector<GammaRun> out;
    const Window w = Window::square(1.0, 1.0 / 32);
    const ShapeSpec hp = parse_shape("halfplane");
    const HalfPlane& line = std::get<HalfPlane>(hp.kind);
    for (double s : {0.3, 0.75})
      for (double eps : {0.2, 0.1, 0.05}) {
        const DescentResult r = minimize_G(binary_field(hp, w), s, eps);
        bool mono = true;
        for (std::size_t k = 1; k < r.energies.size(); ++k) mono = mono && r.energies[k] <= r.energies[k - 1];
        const double dev = interface_deviation(zero_level(r.field), line);
        const Vec2 c = nearest_above(r.field, {0, 0}, 0.1);
        const DensityReport d = interface_and_density(r.field, 0.1, 0.1, {0.25, 0.5}, c);
        out.push_back({s, eps, dev, d.rows[0].ratio, d.rows[1].ratio, mono});
      }
    return out;
  }();
  return runs;
}

Outcome a12() {
  const double h = 1.0 / 32;
  bool ok = true;
  std::string d;
  for (const GammaRun& g : gamma_runs()) {
    ok = ok && g.monotone;
    if (g.eps == 0.05) {
      ok = ok && g.dev <= 2 * h;
      d += fmt("s=%.2f dev=%.3g; ", g.s, g.dev);
    }
  }
  return {ok, d + "energies monotone"};
}

Outcome a13() {
  double mn = 1e300;
  for (const GammaRun& g : gamma_runs()) mn = std::min({mn, g.ratio25, g.ratio50});
  return {mn >= 0.05, fmt("min density ratio %.4g (floor 0.05)", mn)};
}

Outcome a14() {
  double mass_err = 0;
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      const ExtensionKernel k = normalize_kernel(n, s);
      for (double t : {0.5, 1.0, 2.0}) mass_err = std::max(mass_err, std::abs(kernel_mass(k, t) - 1));
    }
  const ExtensionKernel p = normalize_kernel(1, 0.5);
  double pw = 0;
  for (int i = 0; i < 10; ++i) {
    const double x = -2.0 + 0.45 * i, t = 0.2 + 0.3 * i;
    pw = std::max(pw, std::abs(p(std::abs(x), t) - t / (kPi * (x * x + t * t))));
  }
  return {mass_err <= 1e-6 && pw <= 1e-4, fmt("mass error %.2g, Poisson pointwise %.2g", mass_err, pw)};
}

Outcome a15() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 0.5);
  const double s = 0.3;
  double min_slack = 1e300, max_slack = 0;
  bool ordered_exact = true;
  const Window wg = Window::square(0.5, 0.125);
  const Window wh = Window::square(0.5, 0.25);
  const auto levels = geometric_levels(wh.h(), 1.0);
  const ShapeSpec hp = parse_shape("halfplane");
  for (int trial = 0; trial < 1000; ++trial) {
    const bool ordered = trial % 10 == 0;
    ScalarField u{wg, std::vector<double>(wg.cells())}, v = u;
    for (std::size_t a = 0; a < wg.cells(); ++a) {
      u.values[a] = U(rng);
      v.values[a] = ordered ? u.values[a] + P(rng) : U(rng);
    }
    const MinMaxCheck g = minmax_identity_check(u, v, s, 0.0);
    HalfSpaceField x = make_half_space(wh, levels, hp), y = x;
    for (std::size_t a = 0; a < x.values.size(); ++a) {
      x.values[a] = U(rng);
      y.values[a] = ordered ? x.values[a] + P(rng) : U(rng);
    }
    const MinMaxCheck e = minmax_identity_check(x, y, s);
    for (const MinMaxCheck& c : {g, e}) {
      min_slack = std::min(min_slack, c.slack);
      max_slack = std::max(max_slack, c.slack);
      if (ordered) ordered_exact = ordered_exact && c.slack == 0.0 && c.sum == c.minmax;
    }
  }
  return {min_slack >= -1e-12 && max_slack > 0 && ordered_exact,
          fmt("min slack %.3g, max slack %.3g, ordered cases exact: %s", min_slack, max_slack,
              ordered_exact ? "yes" : "no")};
}

Outcome a16() {
  bool ok = true;
  std::string d;
  for (double s : {0.25, 0.4}) {
    const GapFit f = competitor_gap_fit(s, {8, 16, 32});
    ok = ok && std::abs(f.slope + 2 * s) <= 0.15;
    d += fmt("s=%.2f slope %.4f (target %.2f); ", s, f.slope, -2 * s);
  }
  return {ok, d};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& table() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> t{
      {"A1", a1},   {"A2", a2},   {"A3", a3},   {"A4", a4},   {"A5", a5},   {"A6", a6},
      {"A7", a7},   {"A8", a8},   {"A9", a9},   {"A10", a10}, {"A11", a11}, {"A12", a12},
      {"A13", a13}, {"A14", a14}, {"A15", a15}, {"A16", a16}};
  return t;
}

}  // namespace

std::vector<std::string> criterion_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : table()) ids.push_back(id);
  return ids;
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, std::ostream& log) {
  for (const std::string& id : only) {
    const auto ids = criterion_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      fail(ErrorCode::InvalidArgument, "unknown criterion id '" + id + "'");
  }
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : table()) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    r.id = id;
    try {
      const Outcome o = fn();
      r.pass = o.pass;
      r.blocking = o.blocking;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.detail << fmt(" [%.1fs]", r.seconds) << std::endl;
    out.push_back(r);
  }
  return out;
}

nlohmann::json summary_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const CriterionResult& r : results) {
    arr.push_back({{"id", r.id}, {"pass", r.pass}, {"blocking", r.blocking}, {"detail", r.detail},
                   {"seconds", r.seconds}});
    if (r.blocking && !r.pass) all = false;
  }
  return {{"schema", 1}, {"criteria", arr}, {"all_blocking_pass", all}};
}

}  // namespace fraclab::lab
