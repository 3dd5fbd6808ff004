#pragma once

#include <vector>

#include "fraclab/perimeter.hpp"
#include "fraclab/shapes.hpp"

namespace fraclab {

// P(x, t) = c t^{2s} / (|x|^2 + t^2)^{(n+2s)/2}
struct ExtensionKernel {
  int n = 2;
  double s = 0.5;
  double c = 1.0;

  double operator()(double r, double t) const;
};

ExtensionKernel normalize_kernel(int n, double s);
// Integral of P(., t) over R^n: quadrature on |x| <= 64 plus a series tail.
double kernel_mass(const ExtensionKernel& k, double t);

// Heights h/2 = t_0 < t_1 < ... with ratio 1.2, the last one equal to H.
std::vector<double> geometric_levels(double h, double H, double ratio = 1.2);

// Node values v(x_a, t_k) over a window of trace cells; level-major storage.
struct HalfSpaceField {
  Window window;
  std::vector<double> levels;
  std::vector<double> values;
  ShapeSpec trace;

  std::size_t index(int i, int j, int k) const { return k * window.cells() + window.index(i, j); }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
};

HalfSpaceField make_half_space(const Window& window, const std::vector<double>& levels,
                               const ShapeSpec& trace);

// Extension of the +-1 trace at a single point (x, t).
double extend_at(const ShapeSpec& trace, const ExtensionKernel& k, Vec2 x, double t, double h);
HalfSpaceField extend(const ShapeSpec& trace, const ExtensionKernel& k, const Window& window,
                      double H);

// Half-open ranges of grid cells; a cell spans nodes i..i+1, j..j+1, k..k+1.
struct SubBox {
  int i0 = 0, i1 = -1;
  int j0 = 0, j1 = -1;
  int k0 = 0, k1 = -1;
};
SubBox full_box(const HalfSpaceField& v);

double weighted_energy(const HalfSpaceField& v, double s, const SubBox& box);
double weighted_energy(const HalfSpaceField& v, double s);

struct MinMaxCheck {
  double minmax = 0.0;  // E(min(u,v)) + E(max(u,v))
  double sum = 0.0;     // E(u) + E(v)
  double slack = 0.0;   // sum - minmax, accumulated term by term
};

MinMaxCheck minmax_identity_check(const ScalarField& u, const ScalarField& v, double s, double R_t);
MinMaxCheck minmax_identity_check(const HalfSpaceField& u, const HalfSpaceField& v, double s);

// Weighted-energy change on the half ball B_R when the one-dimensional
// half-plane extension (n = 2 trace) is moved by `shift` along x1 inside B_{R/2}
// and glued back by a linear cutoff on [R/2, R]. Evaluated as the exact
// pullback integral, so only the cutoff annulus contributes.
double translated_competitor_gap(double s, double R, double shift = 1.0);

struct GapFit {
  std::vector<double> radii;
  std::vector<double> gaps;
  double slope = 0.0;
  double prefactor = 0.0;
};

GapFit competitor_gap_fit(double s, const std::vector<double>& radii, double shift = 1.0);

}  // namespace fraclab
