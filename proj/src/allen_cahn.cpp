#include "fraclab/allen_cahn.hpp"

#include <algorithm>

#include "lattice.hpp"

namespace fraclab {

double PhaseField::value_at(Vec2 x) const {
  int i = 0, j = 0;
  window.locate(x, i, j);
  if (window.inside(i, j)) return values[window.index(i, j)];
  return trace(x);
}

PhaseField binary_field(const ShapeSpec& exterior, const Window& window) {
  PhaseField u{window, std::vector<double>(window.cells()), exterior};
  for (int j = 0; j < window.ny(); ++j)
    for (int i = 0; i < window.nx(); ++i)
      u.values[window.index(i, j)] = exterior.contains(window.center(i, j)) ? 1.0 : -1.0;
  return u;
}

PhaseField constant_field(double value, const ShapeSpec& exterior, const Window& window) {
  return PhaseField{window, std::vector<double>(window.cells(), value), exterior};
}

Multipliers branch_multipliers(double s, double eps) {
  require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  if (!(eps > 0 && eps < 1)) fail(ErrorCode::EpsOutOfRange, "eps must satisfy eps ∈ (0,1)");
  Multipliers m;
  if (s < 0.5) {
    m.branch = Branch::Below;
    m.kinetic = 1.0;
    m.potential = std::pow(eps, -2 * s);
  } else if (s == 0.5) {
    m.branch = Branch::Half;
    const double l = std::log(1 / eps);
    m.kinetic = l;
    m.potential = l / eps;
  } else {
    m.branch = Branch::Above;
    m.kinetic = std::pow(eps, 2 * s - 1);
    m.potential = 1 / eps;
  }
  return m;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Below: return "s<1/2";
    case Branch::Half: return "s=1/2";
    case Branch::Above: return "s>1/2";
  }
  return "?";
}

AllenCahnModel::AllenCahnModel(const Window& window, const ShapeSpec& exterior, double s, double R_t)
    : window_(window), s_(s) {
  require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  const int nx = window.nx(), ny = window.ny(), n = window.dim();
  const double h = window.h();
  const double diag = h * std::hypot(double(nx), double(ny));
  // Every window pair must sit inside the explicit range, or the tail would
  // count window cells a second time.
  rt_ = std::max({R_t, diag + h, 4 * h});

  const int wx = 2 * nx - 1, wy = 2 * ny - 1;
  ww_.assign(static_cast<std::size_t>(wx) * wy, 0.0);
  parallel_for(static_cast<std::size_t>(wy), [&](std::size_t r) {
    const int dj = static_cast<int>(r) - (ny - 1);
    for (int di = -(nx - 1); di <= nx - 1; ++di) {
      if (di == 0 && dj == 0) continue;
      ww_[r * wx + (di + nx - 1)] = pair_weight(di, dj, h, s, n);
    }
  });

  const std::size_t N = window.cells();
  row_w_.assign(N, 0.0);
  S0_.assign(N, 0.0);
  S1_.assign(N, 0.0);
  occ_.assign(N, 0.0);
  const InteractionTable t = build_table(window, s, rt_);
  cell_tail_ = t.cell_tail();
  const auto L = detail::make_lattice(rasterize(exterior, window), t.M);
  parallel_for(N, [&](std::size_t a) {
    const int i = static_cast<int>(a % nx), j = static_cast<int>(a / nx);
    KahanSum rw;
    for (int bj = 0; bj < ny; ++bj)
      for (int bi = 0; bi < nx; ++bi)
        if (bi != i || bj != j) rw += pair_w(bi - i, bj - j);
    row_w_[a] = rw.value();
    KahanSum s0, s1;
    for (const Offset& o : t.offsets) {
      const int bi = i + o.di, bj = j + o.dj;
      if (window.inside(bi, bj)) continue;
      s0 += o.w;
      s1 += L.at(bi, bj) ? o.w : -o.w;
    }
    S0_[a] = s0.value();
    S1_[a] = s1.value();
    occ_[a] = occupancy_beyond(exterior, window.center(i, j), rt_, s);
  });
}

// L_a = sum_b w(b-a) (u_a - u_b) over window cells. The weight rows are even
// in di, so the inner loop runs forward through memory.
void AllenCahnModel::local_sums(const std::vector<double>& u, std::vector<double>& L) const {
  const int nx = window_.nx(), ny = window_.ny(), wx = 2 * nx - 1;
  L.assign(u.size(), 0.0);
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jr) {
    const int j = static_cast<int>(jr);
    double* out = L.data() + static_cast<std::size_t>(j) * nx;
    for (int bj = 0; bj < ny; ++bj) {
      const double* wrow = ww_.data() + static_cast<std::size_t>(bj - j + ny - 1) * wx;
      const double* ub = u.data() + static_cast<std::size_t>(bj) * nx;
      for (int bi = 0; bi < nx; ++bi) {
        const double v = ub[bi];
        if (v == 0.0) continue;
        const double* wk = wrow + (nx - 1 - bi);
        for (int i = 0; i < nx; ++i) out[i] += wk[i] * v;
      }
    }
    const double* ua = u.data() + static_cast<std::size_t>(j) * nx;
    const double* rw = row_w_.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) out[i] = rw[i] * ua[i] - out[i];
  });
}

EnergyBreakdown AllenCahnModel::energy(const std::vector<double>& u, double eps) const {
  if (u.size() != window_.cells()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  const int nx = window_.nx(), ny = window_.ny();
  const std::size_t N = u.size();
  std::vector<double> partial(N, 0.0);
  parallel_for(N, [&](std::size_t a) {
    const int i = static_cast<int>(a % nx), j = static_cast<int>(a / nx);
    KahanSum acc;
    // Pairs with b after a in row-major order.
    for (int bj = j; bj < ny; ++bj)
      for (int bi = (bj == j ? i + 1 : 0); bi < nx; ++bi) {
        const double d = u[a] - u[window_.index(bi, bj)];
        if (d != 0.0) acc += pair_w(bi - i, bj - j) * d * d;
      }
    const double ua = u[a];
    acc += S0_[a] * ua * ua - 2 * S1_[a] * ua + S0_[a];
    acc += cell_tail_ * (occ_[a] * (ua - 1) * (ua - 1) + (1 - occ_[a]) * (ua + 1) * (ua + 1));
    partial[a] = acc.value();
  });
  KahanSum kin, pot;
  for (std::size_t a = 0; a < N; ++a) {
    kin += partial[a];
    pot += double_well(u[a]);
  }
  EnergyBreakdown e;
  e.kinetic = kin.value();
  e.potential = window_.cell_volume() * pot.value();
  if (eps > 0) {
    const Multipliers m = branch_multipliers(s_, eps);
    e.eps = eps;
    e.branch = m.branch;
    e.kinetic_multiplier = m.kinetic;
    e.potential_multiplier = m.potential;
  } else {
    e.branch = s_ < 0.5 ? Branch::Below : (s_ == 0.5 ? Branch::Half : Branch::Above);
  }
  e.total = e.kinetic_multiplier * e.kinetic + e.potential_multiplier * e.potential;
  return e;
}

double AllenCahnModel::value_and_gradient(const std::vector<double>& u, double mk, double mp,
                                          std::vector<double>& g) const {
  if (u.size() != window_.cells()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  std::vector<double> L;
  local_sums(u, L);
  const double hn = window_.cell_volume();
  const std::size_t N = u.size();
  g.resize(N);
  double kin = 0.0, pot = 0.0;
  for (std::size_t a = 0; a < N; ++a) {
    const double ua = u[a], oc = occ_[a];
    const double ext = S0_[a] * ua * ua - 2 * S1_[a] * ua + S0_[a] +
                       cell_tail_ * (oc * (ua - 1) * (ua - 1) + (1 - oc) * (ua + 1) * (ua + 1));
    kin += ua * L[a] + ext;
    pot += double_well(ua);
    const double dext = 2 * (S0_[a] * ua - S1_[a]) + 2 * cell_tail_ * (oc * (ua - 1) + (1 - oc) * (ua + 1));
    g[a] = mk * (2 * L[a] + dext) + mp * hn * double_well_prime(ua);
  }
  return mk * kin + mp * hn * pot;
}

void AllenCahnModel::gradient(const std::vector<double>& u, double mk, double mp,
                              std::vector<double>& g) const {
  (void)value_and_gradient(u, mk, mp, g);
}

EnergyBreakdown energy_G(const PhaseField& u, double s, double R_t) {
  return AllenCahnModel(u.window, u.exterior, s, R_t).energy(u.values);
}

EnergyBreakdown energy_G_eps(const PhaseField& u, double s, double eps, double R_t) {
  (void)branch_multipliers(s, eps);  // validate before the model build
  return AllenCahnModel(u.window, u.exterior, s, R_t).energy(u.values, eps);
}

PhaseField rescale(const PhaseField& u, double eps) {
  if (!(eps > 0)) fail(ErrorCode::EpsOutOfRange, "eps must be positive");
  const Window& w = u.window;
  PhaseField out{w, std::vector<double>(w.cells()), scale_shape(u.exterior, eps)};
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i)
      out.values[w.index(i, j)] = u.value_at((1 / eps) * w.center(i, j));
  return out;
}

std::vector<double> frac_laplacian_residual(const PhaseField& u, double s, double R_t) {
  AllenCahnModel m(u.window, u.exterior, s, R_t);
  std::vector<double> g;
  m.gradient(u.values, 0.5, 1.0, g);
  const double hn = u.window.cell_volume();
  for (double& v : g) v /= hn;
  return g;
}

DescentResult minimize_G(const PhaseField& u0, double s, double eps, const DescentOptions& opt) {
  const Multipliers mult = branch_multipliers(s, eps);
  if (opt.max_iters < 0) fail(ErrorCode::InvalidArgument, "iteration budget must be non-negative");
  AllenCahnModel model(u0.window, u0.exterior, s, opt.R_t);
  const double hn = u0.window.cell_volume();
  const std::size_t N = u0.values.size();
  double eta = opt.eta0 > 0 ? opt.eta0 : std::pow(u0.window.h(), 2 * s);

  std::vector<double> u(u0.values), g, trial(N), gt;
  for (double& v : u) v = std::clamp(v, -1.0, 1.0);
  double E = model.value_and_gradient(u, mult.kinetic, mult.potential, g);

  auto projected_sup = [&](const std::vector<double>& x, const std::vector<double>& gr) {
    double m = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
      if ((x[a] >= 1 && gr[a] < 0) || (x[a] <= -1 && gr[a] > 0)) continue;
      m = std::max(m, std::abs(gr[a]) / hn);
    }
    return m;
  };

  DescentResult r;
  r.energies.push_back(E);
  for (int it = 0; it < opt.max_iters; ++it) {
    if (projected_sup(u, g) == 0.0) {
      r.converged = true;
      break;
    }
    bool accepted = false;
    double Et = E;
    for (int back = 0; back <= 40; ++back) {
      for (std::size_t a = 0; a < N; ++a) trial[a] = std::clamp(u[a] - eta * g[a] / hn, -1.0, 1.0);
      Et = model.value_and_gradient(trial, mult.kinetic, mult.potential, gt);
      if (Et < E) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      if (it == 0) fail(ErrorCode::NoProgress, "no step decreases the energy from the initial field");
      r.converged = true;  // no decrease left at working precision
      break;
    }
    const double decrease = E - Et;
    u.swap(trial);
    g.swap(gt);
    E = Et;
    r.energies.push_back(E);
    r.iterations = it + 1;
    eta *= 1.25;
    if (decrease <= opt.tol * std::max(1.0, std::abs(E))) {
      r.converged = true;
      break;
    }
  }
  r.final_gradient = projected_sup(u, g);
  r.field = PhaseField{u0.window, std::move(u), u0.exterior};
  return r;
}

Vec2 nearest_above(const PhaseField& u, Vec2 x0, double theta) {
  const Window& w = u.window;
  Vec2 best = x0;
  double dist = -1;
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) {
      if (u.values[w.index(i, j)] <= theta) continue;
      const double d = norm(w.center(i, j) - x0);
      if (dist < 0 || d < dist) {
        dist = d;
        best = w.center(i, j);
      }
    }
  return best;
}

std::vector<Segment> zero_level(const PhaseField& u) {
  const Window& w = u.window;
  if (w.dim() == 1) {
    std::vector<Segment> out;
    for (int i = 0; i + 1 < w.nx(); ++i) {
      const double a = u.values[i], b = u.values[i + 1];
      if ((a < 0) != (b < 0)) {
        const double x = w.center(i, 0).x + w.h() * a / (a - b);
        out.push_back({{x, 0}, {x, 0}});
      }
    }
    return out;
  }
  return marching_squares(u.values, w.nx(), w.ny(), w.center(0, 0), w.h(), 0.0);
}

double interface_deviation(const std::vector<Segment>& segs, const HalfPlane& line) {
  const double nn = norm(line.normal);
  double m = 0.0;
  for (const Segment& s : segs)
    for (Vec2 p : {s.a, s.b}) m = std::max(m, std::abs(dot(line.normal, p) - line.offset) / nn);
  return m;
}

DensityReport interface_and_density(const PhaseField& u, double theta1, double theta2,
                                    const std::vector<double>& radii, Vec2 center) {
  if (!(theta1 > -1 && theta1 < 1) || !(theta2 > -1 && theta2 < 1))
    fail(ErrorCode::InvalidArgument, "thresholds must lie in (-1,1)");
  if (!(u.value_at(center) > theta1))
    fail(ErrorCode::CenterBelowTheta, "u at the centre does not exceed theta1");
  const Window& w = u.window;
  const double h = w.h();
  const int n = w.dim();
  DensityReport rep;
  rep.center = center;
  for (double R : radii) {
    if (!(R > 0)) fail(ErrorCode::BadRadii, "density radii must be positive");
    int ci = 0, cj = 0;
    w.locate(center, ci, cj);
    const int k = static_cast<int>(std::ceil(R / h)) + 1;
    KahanSum m;
    for (int j = (n == 2 ? cj - k : 0); j <= (n == 2 ? cj + k : 0); ++j)
      for (int i = ci - k; i <= ci + k; ++i) {
        const Vec2 c = w.center(i, j);
        if (norm(c - center) >= R) continue;
        const double v = w.inside(i, j) ? u.values[w.index(i, j)] : u.trace(c);
        if (v > theta2) m += w.cell_volume();
      }
    rep.rows.push_back({R, m.value(), m.value() / std::pow(R, n)});
  }
  rep.interface = zero_level(u);
  return rep;
}

}  // namespace fraclab
