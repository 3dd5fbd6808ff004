#include "fraclab/mincut.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include "lattice.hpp"

namespace fraclab {

namespace {

bool forward(const Offset& o) { return o.dj > 0 || (o.dj == 0 && o.di > 0); }

}  // namespace

double CutProblem::objective(const Mask& m) const {
  const Window& w = window;
  KahanSum acc;
  for (std::size_t a = 0; a < m.size(); ++a) acc += m[a] ? cost_in[a] : cost_out[a];
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i) {
      const std::uint8_t la = m[w.index(i, j)];
      for (const Offset& o : table.offsets) {
        if (!forward(o)) continue;
        const int bi = i + o.di, bj = j + o.dj;
        if (w.inside(bi, bj) && m[w.index(bi, bj)] != la) acc += o.w;
      }
    }
  acc += constant;
  return acc.value();
}

double CutProblem::flip_delta(const Mask& m, std::size_t a) const {
  const Window& w = window;
  const int i = static_cast<int>(a % w.nx()), j = static_cast<int>(a / w.nx());
  const bool in = m[a];
  KahanSum d;
  d += in ? cost_out[a] - cost_in[a] : cost_in[a] - cost_out[a];
  for (const Offset& o : table.offsets) {
    const int bi = i + o.di, bj = j + o.dj;
    if (!w.inside(bi, bj)) continue;
    // Same label now -> differs after the flip, and vice versa.
    d += (m[w.index(bi, bj)] == in) ? o.w : -o.w;
  }
  return d.value();
}

CutProblem build_problem(const ShapeSpec& exterior, const Window& window, double s, double R_t) {
  require_s(s, 0.0, 0.5, true, "s ∈ (0,1/2)");
  CutProblem p;
  p.window = window;
  p.s = s;
  p.rt = R_t;
  p.exterior = exterior;
  p.table = build_table(window, s, R_t);
  const InteractionTable& t = p.table;
  const GridSet ext = rasterize(exterior, window);
  const auto L = detail::make_lattice(ext, t.M);
  const std::size_t N = window.cells();
  p.cost_in.assign(N, 0.0);
  p.cost_out.assign(N, 0.0);
  p.unseen_pairs.assign(N, 0.0);
  const double ct = t.cell_tail();
  const double pexp = window.dim() + 2 * s;
  parallel_for(N, [&](std::size_t a) {
    const int i = static_cast<int>(a % window.nx()), j = static_cast<int>(a / window.nx());
    KahanSum cin, cout;
    for (const Offset& o : t.offsets) {
      const int bi = i + o.di, bj = j + o.dj;
      if (window.inside(bi, bj)) continue;
      (L.at(bi, bj) ? cout : cin) += o.w;
    }
    const double occ = occupancy_beyond(exterior, window.center(i, j), R_t, s);
    cin += ct * (1.0 - occ);
    cout += ct * occ;
    p.cost_in[a] = cin.value();
    p.cost_out[a] = cout.value();
    KahanSum unseen;
    for (int bj = 0; bj < window.ny(); ++bj)
      for (int bi = 0; bi < window.nx(); ++bi) {
        const double dx = (bi - i) * window.h(), dy = (bj - j) * window.h();
        const double d = std::hypot(dx, dy);
        if (d > R_t * (1 + 1e-12) && !(std::abs(bi - i) <= t.M && std::abs(bj - j) <= t.M &&
                                        t.weight(bi - i, bj - j) > 0))
          unseen += std::pow(window.h(), 2 * window.dim()) * std::pow(d, -pexp);
      }
    p.unseen_pairs[a] = unseen.value();
  });
  return p;
}

MinimizeResult minimize_exact(const CutProblem& p, std::size_t cap) {
  using namespace boost;
  using Traits = adjacency_list_traits<vecS, vecS, directedS>;
  using Graph = adjacency_list<
      vecS, vecS, directedS,
      property<vertex_index_t, long,
               property<vertex_color_t, default_color_type,
                        property<vertex_distance_t, long,
                                 property<vertex_predecessor_t, Traits::edge_descriptor>>>>,
      property<edge_capacity_t, double,
               property<edge_residual_capacity_t, double, property<edge_reverse_t, Traits::edge_descriptor>>>>;

  const Window& w = p.window;
  const std::size_t N = w.cells();
  if (N > cap) fail(ErrorCode::TooLarge, "window exceeds the exact-minimization cell cap; use flip descent");
  Graph g(N + 2);
  const auto src = static_cast<Traits::vertex_descriptor>(N), snk = static_cast<Traits::vertex_descriptor>(N + 1);
  auto cap_map = get(edge_capacity, g);
  auto rev = get(edge_reverse, g);
  auto res = get(edge_residual_capacity, g);
  auto add_pair = [&](std::size_t u, std::size_t v, double cuv, double cvu) {
    auto e1 = add_edge(u, v, g).first;
    auto e2 = add_edge(v, u, g).first;
    cap_map[e1] = cuv;
    cap_map[e2] = cvu;
    rev[e1] = e2;
    rev[e2] = e1;
  };
  // Shift unaries by their common part; only the difference needs an arc.
  KahanSum shift;
  double max_cap = 0.0;
  for (std::size_t a = 0; a < N; ++a) {
    const double m = std::min(p.cost_in[a], p.cost_out[a]);
    shift += m;
    const double in = p.cost_in[a] - m, out = p.cost_out[a] - m;
    if (out > 0) add_pair(src, a, out, 0.0);  // cut when a is OUT
    if (in > 0) add_pair(a, snk, in, 0.0);    // cut when a is IN
    max_cap = std::max({max_cap, in, out});
  }
  for (int j = 0; j < w.ny(); ++j)
    for (int i = 0; i < w.nx(); ++i)
      for (const Offset& o : p.table.offsets) {
        if (!forward(o)) continue;
        const int bi = i + o.di, bj = j + o.dj;
        if (!w.inside(bi, bj)) continue;
        add_pair(w.index(i, j), w.index(bi, bj), o.w, o.w);
        max_cap = std::max(max_cap, o.w);
      }
  const double flow = boykov_kolmogorov_max_flow(g, src, snk);

  // Smallest source side: cells reachable through unsaturated arcs.
  const double tol = 1e-11 * max_cap;
  std::vector<char> seen(N + 2, 0);
  std::deque<std::size_t> queue{src};
  seen[src] = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (auto [e, end] = out_edges(u, g); e != end; ++e) {
      const std::size_t v = target(*e, g);
      if (!seen[v] && res[*e] > tol) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  MinimizeResult r;
  r.method = "maxflow";
  r.mask.assign(N, 0);
  for (std::size_t a = 0; a < N; ++a) r.mask[a] = seen[a] ? 1 : 0;
  r.objective = p.objective(r.mask);
  KahanSum fv;
  fv += flow;
  fv += shift.value();
  fv += p.constant;
  r.flow_value = fv.value();
  r.certificate_gap = std::abs(r.objective - r.flow_value) / std::max(std::abs(r.objective), 1e-300);
  return r;
}

MinimizeResult minimize_brute(const CutProblem& p) {
  const std::size_t N = p.window.cells();
  if (N > 20) fail(ErrorCode::TooLarge, "brute force supports at most 20 cells");
  MinimizeResult best;
  best.method = "brute";
  Mask m(N);
  int best_pop = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << N); ++code) {
    int pop = 0;
    for (std::size_t a = 0; a < N; ++a) {
      m[a] = (code >> a) & 1;
      pop += m[a];
    }
    const double v = p.objective(m);
    if (code == 0 || v < best.objective || (v == best.objective && pop < best_pop)) {
      best.objective = v;
      best.mask = m;
      best_pop = pop;
    }
  }
  return best;
}

MinimizeResult flip_descent(const CutProblem& p, Mask m, std::uint64_t seed) {
  const std::size_t N = p.window.cells();
  if (m.size() != N) fail(ErrorCode::InvalidArgument, "initial mask size mismatch");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double scale = 0.0;
  for (std::size_t a = 0; a < N; ++a) scale = std::max({scale, p.cost_in[a], p.cost_out[a]});
  for (const Offset& o : p.table.offsets) scale += o.w;
  const double thresh = 1e-13 * scale;
  MinimizeResult r;
  r.method = "flip-descent";
  double obj = p.objective(m);
  r.trace.push_back(obj);
  bool changed = true;
  while (changed) {
    changed = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t a : order) {
      const double d = p.flip_delta(m, a);
      if (d < -thresh) {
        m[a] ^= 1;
        obj += d;
        r.trace.push_back(obj);
        changed = true;
      }
    }
  }
  r.mask = std::move(m);
  r.objective = p.objective(r.mask);
  return r;
}

double truncation_bound(const CutProblem& p, const Mask& a, const Mask& b) {
  const Window& w = p.window;
  const int n = w.dim();
  const double R = p.rt, h = w.h();
  const double delta = 0.5 * std::sqrt(double(n)) * h;
  const double pexp = n + 2 * p.s;
  // Lattice cells straddling |y - x| = R are either fully in or fully out.
  const double band = std::pow(h, n) * omega(n) * std::pow(R + delta, n - 1) * 2 * delta *
                      std::pow(R - delta, -pexp);
  KahanSum acc;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) acc += 2 * (band + p.unseen_pairs[k]);
  return acc.value();
}

}  // namespace fraclab
