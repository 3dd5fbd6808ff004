#include "fraclab/perimeter.hpp"

#include <algorithm>

#include "fraclab/contour.hpp"
#include "lattice.hpp"

namespace fraclab {

std::vector<std::uint8_t> domain_mask(const Window& w, const Domain& U) {
  std::vector<std::uint8_t> m(w.cells());
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) m[w.index(i, j)] = U.contains(w.center(i, j)) ? 1 : 0;
  return m;
}

PerimeterValue frac_perimeter(const GridSet& set, double s, double R_t, const Domain& U,
                              PerimeterOptions opt) {
  require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  return frac_perimeter(set, build_table(set.window, s, R_t), U, opt);
}

PerimeterValue frac_perimeter(const GridSet& set, const InteractionTable& t, const Domain& U,
                              PerimeterOptions opt) {
  require_s(t.s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  const Window& w = set.window;
  if (t.n != w.dim() || t.h != w.h())
    fail(ErrorCode::InvalidArgument, "interaction table does not match the window");
  const auto L = detail::make_lattice(set, t.M);
  const auto inU = domain_mask(w, U);
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < inU.size(); ++k)
    if (inU[k]) cells.push_back(k);

  struct Part {
    double e1o1, e1o2, e2o1, tail;
  };
  std::vector<Part> parts(cells.size());
  const double cell_tail = t.cell_tail();
  parallel_for(cells.size(), [&](std::size_t c) {
    const int i = static_cast<int>(cells[c] % w.nx()), j = static_cast<int>(cells[c] / w.nx());
    const bool Ea = L.at(i, j);
    KahanSum s11, s12, s21;
    for (const Offset& o : t.offsets) {
      const int bi = i + o.di, bj = j + o.dj;
      const bool Eb = L.at(bi, bj);
      if (Ea == Eb) continue;
      const bool bU = w.inside(bi, bj) && inU[w.index(bi, bj)];
      if (Ea) {
        if (bU)
          s11 += o.w;
        else
          s12 += o.w;
      } else if (!bU) {
        s21 += o.w;
      }
    }
    double tl = 0.0;
    if (opt.tails) {
      const double occ = occupancy_beyond(set.exterior, w.center(i, j), t.rt, t.s);
      tl = cell_tail * (Ea ? 1.0 - occ : occ);
      (Ea ? s12 : s21) += tl;
    }
    parts[c] = {s11.value(), s12.value(), s21.value(), tl};
  });
  KahanSum a, b, c, tl;
  for (const Part& p : parts) {
    a += p.e1o1;
    b += p.e1o2;
    c += p.e2o1;
    tl += p.tail;
  }
  PerimeterValue v;
  v.e1o1 = a.value();
  v.e1o2 = b.value();
  v.e2o1 = c.value();
  KahanSum tot;
  tot += v.e1o1;
  tot += v.e1o2;
  tot += v.e2o1;
  v.total = tot.value();
  v.rt = t.rt;
  v.tail = tl.value();
  v.tail_share = v.total > 0 ? v.tail / v.total : 0.0;
  return v;
}

double gagliardo_seminorm_sq(const ScalarField& u, double s, double R_t) {
  require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  const Window& w = u.window;
  if (u.values.size() != w.cells()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  const Vec2 ext = w.upper() - w.lower();
  const double diag = w.dim() == 2 ? norm(ext) : ext.x;
  const auto t = build_table(w, s, std::max(R_t, diag + w.h()));
  std::vector<double> part(w.cells());
  parallel_for(w.cells(), [&](std::size_t a) {
    const int i = static_cast<int>(a % w.nx()), j = static_cast<int>(a / w.nx());
    const double ua = u.values[a];
    KahanSum acc;
    for (const Offset& o : t.offsets) {
      const int bi = i + o.di, bj = j + o.dj;
      if (w.inside(bi, bj)) {
        const double d = ua - u.values[w.index(bi, bj)];
        acc += o.w * d * d;
      } else {
        acc += 2.0 * o.w * ua * ua;
      }
    }
    acc += 2.0 * t.cell_tail() * ua * ua;
    part[a] = acc.value();
  });
  KahanSum total;
  for (double p : part) total += p;
  return total.value();
}

double contour_perimeter(const GridSet& g, double r) {
  const Window& w = g.window;
  if (w.dim() == 1) {
    int count = 0;
    for (int i = 0; i + 1 < w.nx(); ++i) {
      const double x = w.center(i, 0).x + 0.5 * w.h();
      if (std::abs(x) < r && g.mask[i] != g.mask[i + 1]) ++count;
    }
    return count;
  }
  std::vector<double> f(w.cells());
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) {
      int c = 0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) c += g.at(i + di, j + dj) ? 1 : 0;
      f[w.index(i, j)] = c / 9.0;
    }
  const auto segs = marching_squares(f, w.nx(), w.ny(), w.center(0, 0), w.h(), 0.5);
  KahanSum len;
  for (const Segment& sgm : segs) len += length_in_disk(sgm, {0, 0}, r);
  return len.value();
}

double classical_perimeter(const GridSet& g, double r) {
  try {
    return exact_local_quantities(g.exterior, r).perimeter_in_Br;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedShape) throw;
  }
  return contour_perimeter(g, r);
}

std::vector<double> a_of_E(const ShapeSpec& spec, const std::vector<double>& s_list) {
  std::vector<double> out;
  for (double s : s_list) {
    require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
    out.push_back(occupancy_beyond(spec, {0, 0}, 1.0, s));
  }
  return out;
}

SweepReport scaled_limits(const ShapeSpec& spec, const Window& window, double r,
                          const std::vector<double>& s_list, LimitMode mode, double R_t) {
  for (double s : s_list) require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  if (s_list.size() < 3) fail(ErrorCode::InvalidArgument, "a sweep needs at least three s values");
  for (std::size_t k = 0; k < s_list.size(); ++k) {
    require_s(s_list[k], 0.0, 0.5, true, "s ∈ (0,1/2)");
    if (k > 0 && (s_list[k] - s_list[k - 1]) * (s_list[1] - s_list[0]) <= 0)
      fail(ErrorCode::InvalidArgument, "s list must be strictly monotone");
  }
  const Vec2 lo = window.lower(), hi = window.upper();
  const double half = 0.5 * std::min(hi.x - lo.x, window.dim() == 2 ? hi.y - lo.y : hi.x - lo.x);
  if (r > half) fail(ErrorCode::InvalidArgument, "B_r must lie inside the window");

  const GridSet g = rasterize(spec, window);
  const Domain U = Domain::ball(r);
  const int n = window.dim();
  const double w_n = omega(n);

  // Analytic targets where available, grid targets always.
  const double per_grid = contour_perimeter(g, r);
  double per_exact = -1, mE = -1, mC = -1;
  try {
    const auto q = exact_local_quantities(spec, r);
    per_exact = q.perimeter_in_Br;
    mE = q.measure_E_in_Br;
    mC = q.measure_complement_in_Br;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedShape) throw;
  }
  const auto inU = domain_mask(window, U);
  double mE_grid = 0, mC_grid = 0;
  for (std::size_t k = 0; k < inU.size(); ++k)
    if (inU[k]) (g.mask[k] ? mE_grid : mC_grid) += window.cell_volume();
  const bool analytic = mode == LimitMode::ToHalf ? per_exact >= 0 : mE >= 0;
  const Density dens = asymptotic_density(spec);

  auto target_at = [&](double s, bool use_grid) {
    if (mode == LimitMode::ToHalf) return w_n * (use_grid || per_exact < 0 ? per_grid : per_exact);
    const double a = dens.defined() ? dens.lo : a_of_E(spec, {s})[0];
    const double me = use_grid || mE < 0 ? mE_grid : mE, mc = use_grid || mE < 0 ? mC_grid : mC;
    return w_n * ((1 - a) * me + a * mc);
  };

  SweepReport rep;
  rep.columns = {"s", "per_s", "scaled", "target", "rel_err", "tail_share"};
  std::vector<double> xs, ys;
  for (double s : s_list) {
    const PerimeterValue pv = frac_perimeter(g, s, R_t, U);
    const double scaled = (mode == LimitMode::ToHalf ? 1 - 2 * s : 2 * s) * pv.total;
    const double target = target_at(s, false);
    rep.add_row({s, pv.total, scaled, target, std::abs(scaled - target) / target, pv.tail_share});
    xs.push_back(mode == LimitMode::ToHalf ? 1 - 2 * s : s);
    ys.push_back(scaled);
  }
  const std::size_t m = xs.size();
  const LinearFit fit = fit_line({xs.end() - 3, xs.end()}, {ys.end() - 3, ys.end()});
  const double limit_target = mode == LimitMode::ToHalf ? target_at(0.5, false) : target_at(s_list.back(), false);
  rep.set_meta("mode", mode == LimitMode::ToHalf ? "to_half" : "to_zero");
  rep.set_meta("shape", format_shape(spec));
  rep.set_meta("r", r);
  rep.set_meta("h", window.h());
  rep.set_meta("rt", R_t);
  rep.set_meta("fit_variable", mode == LimitMode::ToHalf ? "1-2s" : "s");
  rep.set_meta("fit_points", static_cast<double>(std::min<std::size_t>(3, m)));
  rep.set_meta("extrapolated", fit.intercept);
  rep.set_meta("fit_slope", fit.slope);
  rep.set_meta("target_analytic", analytic ? format_g12(limit_target) : std::string("none"));
  rep.set_meta("target_grid", target_at(mode == LimitMode::ToHalf ? 0.5 : s_list.back(), true));
  rep.set_meta("extrapolated_rel_err", std::abs(fit.intercept - limit_target) / limit_target);
  return rep;
}

}  // namespace fraclab
