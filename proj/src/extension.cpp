#include "fraclab/extension.hpp"

#include <algorithm>

#include "fraclab/kernel.hpp"
#include "fraclab/report.hpp"

namespace fraclab {

double ExtensionKernel::operator()(double r, double t) const {
  return c * std::pow(t, 2 * s) * std::pow(r * r + t * t, -0.5 * (n + 2 * s));
}

namespace {

// Integral over R^n of t^{2s}(|x|^2+t^2)^{-q}, without the constant.
double raw_mass(int n, double s, double t) {
  const double q = 0.5 * (n + 2 * s);
  const double A = 64 * std::max(1.0, t);
  auto f = [&](double r) {
    return omega(n) * std::pow(r, n - 1) * std::pow(t, 2 * s) * std::pow(r * r + t * t, -q);
  };
  KahanSum acc;
  double a = 0.0, b = std::min(t, A);
  while (a < A) {
    acc += gauss_integrate(f, a, b, 20);
    a = b;
    b = std::min(2 * b, A);
  }
  // |x| > A: binomial series of (r^2+t^2)^{-q} in (t/r)^2.
  double coef = 1.0, tail = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double term = coef * std::pow(t, 2 * k) * std::pow(A, -2 * s - 2 * k) / (2 * s + 2 * k);
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(tail)) break;
    coef *= (-q - k) / (k + 1);
  }
  acc += omega(n) * std::pow(t, 2 * s) * tail;
  return acc.value();
}

}  // namespace

ExtensionKernel normalize_kernel(int n, double s) {
  if (n != 1 && n != 2) fail(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  return {n, s, 1.0 / raw_mass(n, s, 1.0)};
}

double kernel_mass(const ExtensionKernel& k, double t) {
  if (!(t > 0)) fail(ErrorCode::InvalidArgument, "height must be positive");
  return k.c * raw_mass(k.n, k.s, t);
}

std::vector<double> geometric_levels(double h, double H, double ratio) {
  if (!(h > 0) || !(H > 0.5 * h) || !(ratio > 1))
    fail(ErrorCode::InvalidArgument, "levels need h > 0, H > h/2, ratio > 1");
  std::vector<double> t;
  for (double v = 0.5 * h; v < H * (1 - 1e-9); v *= ratio) t.push_back(v);
  t.push_back(H);
  return t;
}

HalfSpaceField make_half_space(const Window& window, const std::vector<double>& levels,
                               const ShapeSpec& trace) {
  if (levels.size() < 2) fail(ErrorCode::InvalidArgument, "need at least two levels");
  if (!(levels[0] >= 0.5 * window.h() * (1 - 1e-12)))
    fail(ErrorCode::InvalidArgument, "lowest level must be at least h/2");
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (!(levels[k] > levels[k - 1])) fail(ErrorCode::InvalidArgument, "levels must increase");
  return {window, levels, std::vector<double>(levels.size() * window.cells(), 0.0), trace};
}

double extend_at(const ShapeSpec& trace, const ExtensionKernel& k, Vec2 x, double t, double h) {
  if (trace.dimension != k.n) fail(ErrorCode::InvalidArgument, "trace and kernel dimensions differ");
  if (!(t > 0) || !(h > 0)) fail(ErrorCode::InvalidArgument, "height and step must be positive");
  const int n = k.n;
  const double s = k.s, q = 0.5 * (n + 2 * s);
  const double ct = k.c * std::pow(t, 2 * s);
  const int M = static_cast<int>(std::ceil(4 * std::max(t, 2 * h) / h));
  const double L = (M + 0.5) * h;
  auto P = [&](double r2) { return ct * std::pow(r2 + t * t, -q); };

  KahanSum acc;
  const int jlo = n == 2 ? -M : 0, jhi = n == 2 ? M : 0;
  for (int oj = jlo; oj <= jhi; ++oj)
    for (int oi = -M; oi <= M; ++oi) {
      const double gx = std::max(0.0, (std::abs(oi) - 0.5) * h);
      const double gy = n == 2 ? std::max(0.0, (std::abs(oj) - 0.5) * h) : 0.0;
      const double reff = std::sqrt(gx * gx + gy * gy + t * t);
      const int m = reff >= 4 * h ? 4 : (reff >= h ? 8 : 16);
      const GaussRule& g = gauss_rule(m);
      const double cx = oi * h, cy = oj * h;
      double cell = 0.0;
      if (n == 1) {
        for (int a = 0; a < m; ++a) {
          const double dx = cx + 0.5 * h * g.x[a];
          const double sign = trace.contains({x.x + dx, 0}) ? 1.0 : -1.0;
          cell += g.w[a] * sign * P(dx * dx);
        }
        cell *= 0.5 * h;
      } else {
        for (int b = 0; b < m; ++b) {
          const double dy = cy + 0.5 * h * g.x[b];
          for (int a = 0; a < m; ++a) {
            const double dx = cx + 0.5 * h * g.x[a];
            const double sign = trace.contains({x.x + dx, x.y + dy}) ? 1.0 : -1.0;
            cell += g.w[a] * g.w[b] * sign * P(dx * dx + dy * dy);
          }
        }
        cell *= 0.25 * h * h;
      }
      acc += cell;
    }

  // Outside the block: exact kernel mass, weighted by the far-field share of E.
  double far = 0.0;
  if (n == 2) {
    far = ct * 8 / (2 * s) *
          gauss_integrate([&](double phi) {
            const double sec = 1 / std::cos(phi);
            return std::pow(L * L * sec * sec + t * t, -s);
          }, 0.0, kPi / 4, 32);
  } else {
    far = 2 * ct * L / (2 * s) *
          gauss_integrate([&](double w) { return std::pow(L * L + t * t * std::pow(w, 1 / s), -q); },
                          0.0, 1.0, 32);
  }
  const double occ = occupancy_beyond(trace, n == 2 ? x : Vec2{x.x, 0}, L, s);
  acc += far * (2 * occ - 1);
  return acc.value();
}

HalfSpaceField extend(const ShapeSpec& trace, const ExtensionKernel& k, const Window& window,
                      double H) {
  if (window.dim() != k.n) fail(ErrorCode::InvalidArgument, "window and kernel dimensions differ");
  HalfSpaceField v = make_half_space(window, geometric_levels(window.h(), H), trace);
  const std::size_t N = window.cells();
  parallel_for(v.values.size(), [&](std::size_t idx) {
    const std::size_t kk = idx / N, a = idx % N;
    const int i = static_cast<int>(a % window.nx()), j = static_cast<int>(a / window.nx());
    v.values[idx] = extend_at(trace, k, window.center(i, j), v.levels[kk], window.h());
  });
  return v;
}

SubBox full_box(const HalfSpaceField& v) {
  const Window& w = v.window;
  return {0, w.nx() - 1, 0, w.dim() == 2 ? w.ny() - 1 : 1, 0, static_cast<int>(v.levels.size()) - 1};
}

namespace {

// Calls edge(A, B, coef) for every difference term of the cell-based energy:
// the cell energy is vol * sum over axes of the mean of w_e (dv/d)^2 over the
// edges parallel to that axis.
template <class Edge>
void visit_edges(const HalfSpaceField& v, double s, const SubBox& box, Edge&& edge) {
  const Window& w = v.window;
  const bool two = w.dim() == 2;
  const SubBox full = full_box(v);
  if (box.i0 < 0 || box.i1 > full.i1 || box.j0 < 0 || box.j1 > full.j1 || box.k0 < 0 ||
      box.k1 > full.k1 || box.i0 > box.i1 || box.j0 > box.j1 || box.k0 > box.k1)
    fail(ErrorCode::InvalidArgument, "sub-box outside the grid");
  const double h = w.h();
  const double hn = two ? h * h : h;
  const double share = two ? 0.25 : 0.5;  // one over the number of parallel edges
  for (int k = box.k0; k < box.k1; ++k) {
    const double t0 = v.levels[k], t1 = v.levels[k + 1], dt = t1 - t0;
    const double vol = hn * dt;
    const double w0 = std::pow(t0, 1 - 2 * s), w1 = std::pow(t1, 1 - 2 * s);
    const double wm = std::pow(0.5 * (t0 + t1), 1 - 2 * s);
    for (int j = box.j0; j < box.j1; ++j)
      for (int i = box.i0; i < box.i1; ++i) {
        const int jtop = two ? j + 1 : j;
        for (int jj = j; jj <= jtop; ++jj) {
          edge(v.index(i, jj, k), v.index(i + 1, jj, k), vol * share * w0 / (h * h));
          edge(v.index(i, jj, k + 1), v.index(i + 1, jj, k + 1), vol * share * w1 / (h * h));
        }
        if (two)
          for (int ii = i; ii <= i + 1; ++ii) {
            edge(v.index(ii, j, k), v.index(ii, j + 1, k), vol * share * w0 / (h * h));
            edge(v.index(ii, j, k + 1), v.index(ii, j + 1, k + 1), vol * share * w1 / (h * h));
          }
        for (int jj = j; jj <= jtop; ++jj)
          for (int ii = i; ii <= i + 1; ++ii)
            edge(v.index(ii, jj, k), v.index(ii, jj, k + 1), vol * share * wm / (dt * dt));
      }
  }
}

// (a-b)^2 + (c-d)^2 - (min(a,c)-min(b,d))^2 - (max(a,c)-max(b,d))^2 in closed
// form, so that ordered pairs give an exact zero.
double four_point(double a, double b, double c, double d) {
  const double p = (a - c) * (b - d);
  return p < 0 ? -2 * p : 0.0;
}

void same_grid(const Window& a, const Window& b, std::size_t na, std::size_t nb) {
  if (a.nx() != b.nx() || a.ny() != b.ny() || a.h() != b.h() || a.dim() != b.dim() || na != nb)
    fail(ErrorCode::InvalidArgument, "fields live on different grids");
}

}  // namespace

double weighted_energy(const HalfSpaceField& v, double s, const SubBox& box) {
  require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  KahanSum acc;
  visit_edges(v, s, box, [&](std::size_t A, std::size_t B, double coef) {
    const double d = v.values[B] - v.values[A];
    acc += coef * d * d;
  });
  return acc.value();
}

double weighted_energy(const HalfSpaceField& v, double s) { return weighted_energy(v, s, full_box(v)); }

MinMaxCheck minmax_identity_check(const HalfSpaceField& u, const HalfSpaceField& v, double s) {
  same_grid(u.window, v.window, u.values.size(), v.values.size());
  if (u.levels != v.levels) fail(ErrorCode::InvalidArgument, "fields use different levels");
  HalfSpaceField lo = u, hi = u;
  for (std::size_t a = 0; a < u.values.size(); ++a) {
    lo.values[a] = std::min(u.values[a], v.values[a]);
    hi.values[a] = std::max(u.values[a], v.values[a]);
  }
  MinMaxCheck r;
  r.minmax = weighted_energy(lo, s) + weighted_energy(hi, s);
  r.sum = weighted_energy(u, s) + weighted_energy(v, s);
  KahanSum slack;
  visit_edges(u, s, full_box(u), [&](std::size_t A, std::size_t B, double coef) {
    slack += coef * four_point(u.values[A], u.values[B], v.values[A], v.values[B]);
  });
  r.slack = slack.value();
  return r;
}

MinMaxCheck minmax_identity_check(const ScalarField& u, const ScalarField& v, double s, double R_t) {
  same_grid(u.window, v.window, u.values.size(), v.values.size());
  const Window& w = u.window;
  const std::size_t N = w.cells();
  ScalarField lo = u, hi = u;
  for (std::size_t a = 0; a < N; ++a) {
    lo.values[a] = std::min(u.values[a], v.values[a]);
    hi.values[a] = std::max(u.values[a], v.values[a]);
  }
  MinMaxCheck r;
  r.minmax = gagliardo_seminorm_sq(lo, s, R_t) + gagliardo_seminorm_sq(hi, s, R_t);
  r.sum = gagliardo_seminorm_sq(u, s, R_t) + gagliardo_seminorm_sq(v, s, R_t);
  // Terms against the zero exterior cancel exactly; only window pairs remain.
  KahanSum slack;
  for (std::size_t a = 0; a < N; ++a) {
    const int i = static_cast<int>(a % w.nx()), j = static_cast<int>(a / w.nx());
    for (std::size_t b = 0; b < N; ++b) {
      if (a == b) continue;
      const int bi = static_cast<int>(b % w.nx()), bj = static_cast<int>(b / w.nx());
      const double wt = pair_weight(bi - i, w.dim() == 2 ? bj - j : 0, w.h(), s, w.dim());
      slack += wt * four_point(u.values[a], u.values[b], v.values[a], v.values[b]);
    }
  }
  r.slack = slack.value();
  return r;
}

double translated_competitor_gap(double s, double R, double shift) {
  require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  if (!(R > 0)) fail(ErrorCode::BadRadii, "radius must be positive");
  if (!(std::abs(shift) < 0.5 * R)) fail(ErrorCode::InvalidArgument, "shift must be below R/2");
  const double c1 = normalize_kernel(1, s).c;
  const GaussRule& gr = gauss_rule(20);
  const GaussRule& ga = gauss_rule(32);
  const GaussRule& gt = gauss_rule(64);
  // alpha = (pi/2) w^m removes the (sin alpha)^{-2s} endpoint behaviour.
  const double m = 1 / (1 - 2 * s);
  KahanSum total;
  for (std::size_t ir = 0; ir < gr.x.size(); ++ir) {
    const double rho = 0.75 * R + 0.25 * R * gr.x[ir];
    const double wr = 0.25 * R * gr.w[ir];
    const double kk = -2 * shift / (R * rho);  // gradient of shift*phi(|X|/R) is kk*X
    for (std::size_t ia = 0; ia < ga.x.size(); ++ia) {
      const double wv = 0.5 * (ga.x[ia] + 1);
      const double alpha = 0.5 * kPi * std::pow(wv, m);
      const double walpha = 0.5 * ga.w[ia] * 0.5 * kPi * m * std::pow(wv, m - 1);
      const double sa = std::sin(alpha), ca = std::cos(alpha);
      KahanSum ring;
      for (std::size_t it = 0; it < gt.x.size(); ++it) {
        const double theta = 0.5 * kPi * (gt.x[it] + 1);
        const double st = std::sin(theta), cth = std::cos(theta);
        const double x1 = rho * sa * cth, x2 = rho * ca, t = rho * sa * st;
        const double g = c1 * std::pow(st, 1 + 2 * s);
        const double p1 = 2 * g / t, pt = -2 * x1 * g / (t * t);
        const double a1 = kk * x1, a2 = kk * x2, at = kk * t;
        const double pp = p1 * p1 + pt * pt, ap = a1 * p1 + at * pt;
        const double aa = a1 * a1 + a2 * a2 + at * at;
        const double f = a1 * pp - 2 * p1 * ap + aa * p1 * p1 / (1 + a1);
        ring += 0.5 * kPi * gt.w[it] * std::pow(t, 1 - 2 * s) * f;
      }
      total += wr * walpha * rho * rho * sa * ring.value();
    }
  }
  return 2 * total.value();  // alpha and pi - alpha contribute equally
}

GapFit competitor_gap_fit(double s, const std::vector<double>& radii, double shift) {
  if (radii.size() < 2) fail(ErrorCode::BadRadii, "need at least two radii");
  GapFit fit;
  fit.radii = radii;
  std::vector<double> lx, ly;
  for (double R : radii) {
    const double g = translated_competitor_gap(s, R, shift);
    fit.gaps.push_back(g);
    lx.push_back(std::log(R));
    ly.push_back(std::log(g));
  }
  const LinearFit lf = fit_line(lx, ly);
  fit.slope = lf.slope;
  fit.prefactor = std::exp(lf.intercept);
  return fit;
}

}  // namespace fraclab
