#include "fraclab/lab/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "fraclab/allen_cahn.hpp"
#include "fraclab/euler_lagrange.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/lab/acceptance.hpp"
#include "fraclab/mincut.hpp"
#include "fraclab/perimeter.hpp"

namespace fraclab::lab {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

Window make_window(const ExperimentConfig& c, int dim) {
  return dim == 1 ? Window::interval(-c.window, c.window, c.h) : Window::square(c.window, c.h);
}

double default_rt(const ExperimentConfig& c) { return c.rt > 0 ? c.rt : std::max(4 * c.h, 1.5 * c.window); }

// Writes to the named file, or to `fallback` when the name is empty.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open output file " + path);
  write(f);
}

void stamp(SweepReport& rep, const ExperimentConfig& c, Clock::time_point start) {
  rep.set_meta("config_hash", config_hash(c));
  rep.set_meta("code_version", kCodeVersion);
  // Kept last: the only line that differs between identical runs.
  rep.set_meta("wall_time", std::chrono::duration<double>(Clock::now() - start).count());
}

void write_matrix(std::ostream& out, const Window& w, const std::vector<double>& v, std::size_t base = 0) {
  for (int j = w.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < w.nx(); ++i) out << (i ? " " : "") << format_g12(v[base + w.index(i, j)]);
    out << '\n';
  }
}

int cmd_perimeter(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Window w = make_window(c, spec.dimension);
  const Domain U = c.r > 0 ? Domain::ball(c.r) : Domain::window();
  const PerimeterValue v = frac_perimeter(rasterize(spec, w), c.s, default_rt(c), U);
  SweepReport rep;
  rep.columns = {"s", "per_s", "e1o1", "e1o2", "e2o1", "tail_share"};
  rep.add_row({c.s, v.total, v.e1o1, v.e1o2, v.e2o1, v.tail_share});
  rep.set_meta("shape", format_shape(spec));
  rep.set_meta("h", c.h);
  rep.set_meta("rt", v.rt);
  rep.set_meta("r", c.r);
  stamp(rep, c, t0);
  emit(c.out, out, [&](std::ostream& o) { rep.write_csv(o); });
  return 0;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Window w = make_window(c, spec.dimension);
  const LimitMode mode = c.mode == "to_half" ? LimitMode::ToHalf : LimitMode::ToZero;
  std::vector<double> s_list = c.s_list;
  if (s_list.empty())
    s_list = mode == LimitMode::ToHalf ? std::vector<double>{0.40, 0.44, 0.47, 0.49}
                                       : std::vector<double>{0.05, 0.02, 0.01};
  const double r = c.r > 0 ? c.r : std::min(1.0, c.window);
  SweepReport rep = scaled_limits(spec, w, r, s_list, mode, default_rt(c));
  stamp(rep, c, t0);
  emit(c.out, out, [&](std::ostream& o) { rep.write_csv(o); });
  return 0;
}

int cmd_el(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Vec2 x0{c.x0[0], c.x0[1]};
  const double rt = c.rt > 0 ? c.rt : 8.0;
  ELOptions opt;
  opt.refine_estimate = true;
  const ELValue v = el_integral(spec, x0, c.s, c.rho0, rt, opt);
  SweepReport rep;
  rep.columns = {"x", "y", "value", "error", "annulus", "far"};
  rep.add_row({x0.x, x0.y, v.value, v.error, v.annulus, v.far});
  rep.set_meta("shape", format_shape(spec));
  rep.set_meta("rho0", c.rho0);
  rep.set_meta("rt", rt);
  stamp(rep, c, t0);
  emit(c.out, out, [&](std::ostream& o) { rep.write_csv(o); });
  return 0;
}

int cmd_minimize(const ExperimentConfig& c, std::ostream& out) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Window w = make_window(c, spec.dimension);
  const double rt = default_rt(c);
  const CutProblem p = build_problem(spec, w, c.s, rt);
  const GridSet input = rasterize(spec, w);
  const MinimizeResult r = c.method == "flip" ? flip_descent(p, input.mask, c.seed) : minimize_exact(p);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open output file " + c.out);
    write_pgm(f, GridSet{w, r.mask, spec});
  }
  std::size_t changed = 0;
  for (std::size_t a = 0; a < r.mask.size(); ++a) changed += r.mask[a] != input.mask[a];
  json rec{{"objective", r.objective},
           {"method", r.method},
           {"cells", w.cells()},
           {"rt", rt},
           {"margin_vs_input", p.objective(input.mask) - r.objective},
           {"cells_changed", changed},
           {"truncation_bound", truncation_bound(p, r.mask, input.mask)},
           {"tie_break", r.tie_break}};
  if (r.method == "maxflow") {
    rec["flow_value"] = r.flow_value;
    rec["certificate_gap"] = r.certificate_gap;
  }
  emit(c.json.empty() ? c.report : c.json, out, [&](std::ostream& o) { o << rec.dump(2) << '\n'; });
  return 0;
}

int cmd_allen_cahn(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Window w = make_window(c, spec.dimension);
  DescentOptions opt;
  opt.max_iters = c.iters;
  opt.tol = c.tol;
  opt.R_t = c.rt;
  const DescentResult r = minimize_G(binary_field(spec, w), c.s, c.eps, opt);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open output file " + c.out);
    write_matrix(f, w, r.field.values);
  }
  const EnergyBreakdown e = energy_G_eps(r.field, c.s, c.eps, c.rt);
  if (!c.report.empty()) {
    const DensityReport d = interface_and_density(r.field, c.thetas[0], c.thetas[1], c.radii,
                                                  nearest_above(r.field, {c.x0[0], c.x0[1]}, c.thetas[0]));
    SweepReport rep;
    rep.columns = {"R", "measure", "ratio"};
    for (const DensityRow& row : d.rows) rep.add_row({row.R, row.measure, row.ratio});
    rep.set_meta("center_x", d.center.x);
    rep.set_meta("center_y", d.center.y);
    rep.set_meta("interface_segments", static_cast<double>(d.interface.size()));
    stamp(rep, c, t0);
    emit(c.report, out, [&](std::ostream& o) { rep.write_csv(o); });
  }
  SweepReport sum;
  sum.columns = {"s", "eps", "iterations", "converged", "kinetic", "potential", "total", "final_gradient"};
  sum.add_row({c.s, c.eps, double(r.iterations), r.converged ? 1.0 : 0.0, e.kinetic, e.potential, e.total,
               r.final_gradient});
  sum.set_meta("branch", branch_name(e.branch));
  sum.set_meta("note", "descent returns a critical point, not a certified global minimizer");
  stamp(sum, c, t0);
  sum.write_csv(out);
  return 0;
}

int cmd_gamma_sweep(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const ShapeSpec spec = parse_shape(c.shape);
  const auto* line = std::get_if<HalfPlane>(&spec.kind);
  if (!line) fail(ErrorCode::UnsupportedShape, "gamma-sweep measures deviation from a half-plane trace");
  const Window w = make_window(c, spec.dimension);
  DescentOptions opt;
  opt.max_iters = c.iters;
  opt.tol = c.tol;
  opt.R_t = c.rt;
  SweepReport rep;
  rep.columns = {"eps", "iterations", "total", "interface_dev", "dev_over_h", "monotone"};
  for (double eps : c.eps_list) {
    const DescentResult r = minimize_G(binary_field(spec, w), c.s, eps, opt);
    bool mono = true;
    for (std::size_t k = 1; k < r.energies.size(); ++k) mono = mono && r.energies[k] <= r.energies[k - 1];
    const double dev = interface_deviation(zero_level(r.field), *line);
    rep.add_row({eps, double(r.iterations), r.energies.back(), dev, dev / w.h(), mono ? 1.0 : 0.0});
  }
  rep.set_meta("s", c.s);
  rep.set_meta("shape", format_shape(spec));
  stamp(rep, c, t0);
  emit(c.out, out, [&](std::ostream& o) { rep.write_csv(o); });
  return 0;
}

int cmd_extend(const ExperimentConfig& c, std::ostream& out) {
  const ShapeSpec spec = parse_shape(c.shape);
  const Window w = make_window(c, spec.dimension);
  const ExtensionKernel k = normalize_kernel(spec.dimension, c.s);
  const HalfSpaceField v = extend(spec, k, w, c.height);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open output file " + c.out);
    for (std::size_t kk = 0; kk < v.levels.size(); ++kk) {
      f << "# level " << kk << " t=" << format_g12(v.levels[kk]) << '\n';
      write_matrix(f, w, v.values, kk * w.cells());
    }
  }
  SweepReport rep;
  rep.columns = {"s", "c_ns", "levels", "energy"};
  rep.add_row({c.s, k.c, double(v.levels.size()), weighted_energy(v, c.s)});
  rep.set_meta("trace", format_shape(spec));
  rep.write_csv(out);
  return 0;
}

int cmd_cone_demo(const ExperimentConfig& c, std::ostream& out, Clock::time_point t0) {
  const Window w = Window::square(c.window, c.h);
  const double rt = default_rt(c);
  char sq[64];
  std::snprintf(sq, sizeof sq, "crosscone+sq:l=%.17g", c.h);
  const ShapeSpec K = parse_shape("crosscone"), Kp = parse_shape(sq);
  SweepReport rep;
  rep.columns = {"variant", "per_s", "el_value", "el_error"};
  const double el_rt = 8.0;
  for (int variant = 0; variant < 2; ++variant) {
    const ShapeSpec& spec = variant == 0 ? K : Kp;
    const PerimeterValue p = frac_perimeter(rasterize(spec, w), c.s, rt);
    const ELValue e = el_integral(spec, {0, 0}, c.s, std::min(c.rho0, 0.25 * c.h), el_rt);
    rep.add_row({double(variant), p.total, e.value, e.error});
  }
  const CutProblem prob = build_problem(K, w, c.s, rt);
  const MinimizeResult m = minimize_exact(prob);
  const Mask input = rasterize(K, w).mask;
  rep.set_meta("variants", "0=crosscone 1=crosscone+square");
  rep.set_meta("argmin_margin", prob.objective(input) - m.objective);
  rep.set_meta("truncation_bound", truncation_bound(prob, m.mask, input));
  stamp(rep, c, t0);
  emit(c.out, out, [&](std::ostream& o) { rep.write_csv(o); });
  return 0;
}

int cmd_repro(const ExperimentConfig& c, std::ostream& out) {
  const auto results = run_acceptance(c.only, out);
  const json summary = summary_json(results);
  if (!c.json.empty()) {
    std::ofstream f(c.json);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open output file " + c.json);
    f << summary.dump(2) << '\n';
  }
  return summary["all_blocking_pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  try {
    validate(c);
    const std::string& e = c.experiment;
    if (e == "perimeter") return cmd_perimeter(c, out, t0);
    if (e == "sweep-s") return cmd_sweep(c, out, t0);
    if (e == "el") return cmd_el(c, out, t0);
    if (e == "minimize") return cmd_minimize(c, out);
    if (e == "allen-cahn") return cmd_allen_cahn(c, out, t0);
    if (e == "gamma-sweep") return cmd_gamma_sweep(c, out, t0);
    if (e == "extend") return cmd_extend(c, out);
    if (e == "cone-demo") return cmd_cone_demo(c, out, t0);
    if (e == "repro") return cmd_repro(c, out);
    fail(ErrorCode::InvalidArgument, "unknown experiment '" + e + "'");
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return ex.numerical() ? 3 : 2;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 3;
  }
}

}  // namespace fraclab::lab
