#include "fraclab/euler_lagrange.hpp"

#include "fraclab/kernel.hpp"

namespace fraclab {

namespace {

struct Pass {
  double annulus;
  double inner_imbalance;  // angular integral of chi_E - chi_E^c on the first ring
};

Pass polar_pass(const ShapeSpec& spec, Vec2 x0, double s, double rho0, double R_t, int per_decade,
                int angles) {
  const double l0 = std::log(rho0), l1 = std::log(R_t);
  const int nr = std::max(1, static_cast<int>(std::ceil(per_decade * (l1 - l0) / std::log(10.0))));
  const double dl = (l1 - l0) / nr;
  const int half = angles / 2;
  const double dphi = 2 * kPi / angles;
  std::vector<Vec2> dirs(half);
  for (int k = 0; k < half; ++k) dirs[k] = {std::cos((k + 0.5) * dphi), std::sin((k + 0.5) * dphi)};
  const bool one_d = spec.dimension == 1;
  KahanSum total;
  double inner = 0.0;
  for (int r = 0; r < nr; ++r) {
    const double a = l0 + r * dl, b = a + dl;
    const double rho = std::exp(0.5 * (a + b));
    // Exact radial weight of the log cell: int rho^{-1-2s} d rho.
    const double wr = (std::exp(-2 * s * a) - std::exp(-2 * s * b)) / (2 * s);
    double ring = 0.0;
    if (one_d) {
      const int sp = spec.contains({x0.x + rho, 0}) ? 1 : -1;
      const int sm = spec.contains({x0.x - rho, 0}) ? 1 : -1;
      ring = sp + sm;
    } else {
      // Antipodal samples enter as one pair so symmetric parts cancel exactly.
      KahanSum acc;
      for (int k = 0; k < half; ++k) {
        const Vec2 y = rho * dirs[k];
        const int sp = spec.contains(x0 + y) ? 1 : -1;
        const int sm = spec.contains(x0 - y) ? 1 : -1;
        acc += static_cast<double>(sp + sm);
      }
      ring = acc.value() * dphi;
    }
    if (r == 0) inner = ring;
    total += wr * ring;
  }
  return {total.value(), inner};
}

}  // namespace

ELValue el_integral(const ShapeSpec& spec, Vec2 x0, double s, double rho0, double R_t,
                    const ELOptions& opt) {
  require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  if (!(rho0 > 0) || !(R_t > rho0)) fail(ErrorCode::BadRadii, "need 0 < rho0 < R_t");
  if (opt.angles < 4 || opt.angles % 4 != 0 || opt.radii_per_decade < 1)
    fail(ErrorCode::InvalidArgument, "angle count must be a positive multiple of 4");
  {
    const bool c = spec.contains(x0);
    bool other = false;
    for (int k = 0; k < 64 && !other; ++k) {
      const double phi = (k + 0.5) * kPi / 32;
      const Vec2 p = spec.dimension == 1 ? Vec2{x0.x + (k % 2 ? rho0 : -rho0), 0}
                                        : x0 + rho0 * Vec2{std::cos(phi), std::sin(phi)};
      other = spec.contains(p) != c;
    }
    if (!other) fail(ErrorCode::NotOnBoundary, "membership is constant near x0");
  }
  const Pass p = polar_pass(spec, x0, s, rho0, R_t, opt.radii_per_decade, opt.angles);
  ELValue v;
  v.x0 = x0;
  v.rho0 = rho0;
  v.rt = R_t;
  v.annulus = p.annulus;
  const double occ = occupancy_beyond(spec, x0, R_t, s);
  v.far = tail(R_t, s, spec.dimension) * (2 * occ - 1);
  v.value = v.annulus + v.far;
  // Inside rho0 the imbalance is assumed to shrink linearly with the radius
  // (quadratically for s >= 1/2, where a linear decay would not be integrable).
  const double decay = s < 0.5 ? 1 - 2 * s : 2 - 2 * s;
  v.error = std::abs(p.inner_imbalance) * std::pow(rho0, -2 * s) / decay;
  if (opt.refine_estimate) {
    const Pass q = polar_pass(spec, x0, s, 0.5 * rho0, R_t, 2 * opt.radii_per_decade, 2 * opt.angles);
    v.error += std::abs(q.annulus - p.annulus);
  }
  return v;
}

std::vector<ELValue> el_profile(const ShapeSpec& spec, const std::vector<Vec2>& points, double s,
                                double rho0, double R_t, const ELOptions& opt) {
  std::vector<ELValue> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) out[k] = el_integral(spec, points[k], s, rho0, R_t, opt);
  return out;
}

}  // namespace fraclab
