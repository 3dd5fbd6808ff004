#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclab/contour.hpp"
#include "fraclab/kernel.hpp"
#include "fraclab/shapes.hpp"

namespace fraclab {

struct PhaseField {
  Window window;
  std::vector<double> values;
  ShapeSpec exterior;  // +1 on E, -1 on its complement

  double trace(Vec2 x) const { return exterior.contains(x) ? 1.0 : -1.0; }
  // Nearest-cell value inside the window, exterior trace outside.
  double value_at(Vec2 x) const;
};

// +1/-1 rasterization of the exterior shape.
PhaseField binary_field(const ShapeSpec& exterior, const Window& window);
PhaseField constant_field(double value, const ShapeSpec& exterior, const Window& window);

inline double double_well(double t) {
  const double a = 1 - t * t;
  return 0.25 * a * a;
}
inline double double_well_prime(double t) { return -t * (1 - t * t); }

enum class Branch { Below, Half, Above };

struct Multipliers {
  double kinetic = 1.0;
  double potential = 1.0;
  Branch branch = Branch::Below;
};

Multipliers branch_multipliers(double s, double eps);
const char* branch_name(Branch b);

struct EnergyBreakdown {
  double kinetic = 0.0;    // double sum over Q_U with the 1/2 of the ordered form
  double potential = 0.0;  // h^n sum W(u)
  double total = 0.0;
  Branch branch = Branch::Below;
  double eps = 1.0;
  double kinetic_multiplier = 1.0;
  double potential_multiplier = 1.0;
};

// Precomputed weights for one (window, exterior, s). Every window pair is
// kept; exterior cells within R_t enter through per-cell sums and the rest
// through the analytic tail.
class AllenCahnModel {
 public:
  AllenCahnModel(const Window& window, const ShapeSpec& exterior, double s, double R_t);

  const Window& window() const { return window_; }
  double s() const { return s_; }
  double rt() const { return rt_; }

  // Kinetic and potential parts with compensated pairwise summation.
  EnergyBreakdown energy(const std::vector<double>& u, double eps = -1.0) const;
  // Gradient of kinetic*mk + potential*mp with respect to the cell values.
  void gradient(const std::vector<double>& u, double mk, double mp, std::vector<double>& g) const;
  // Fast path used inside the descent loop: returns mk*kinetic + mp*potential
  // and fills the gradient from the same pass.
  double value_and_gradient(const std::vector<double>& u, double mk, double mp,
                            std::vector<double>& g) const;

 private:
  void local_sums(const std::vector<double>& u, std::vector<double>& L) const;
  double pair_w(int di, int dj) const {
    return ww_[static_cast<std::size_t>(dj + window_.ny() - 1) * (2 * window_.nx() - 1) +
               (di + window_.nx() - 1)];
  }

  Window window_;
  double s_ = 0.25;
  double rt_ = 0.0;
  std::vector<double> ww_;     // window-window weights by offset
  std::vector<double> row_w_;  // sum of window weights seen from each cell
  std::vector<double> S0_, S1_, occ_;
  double cell_tail_ = 0.0;
};

EnergyBreakdown energy_G(const PhaseField& u, double s, double R_t);
EnergyBreakdown energy_G_eps(const PhaseField& u, double s, double eps, double R_t);

PhaseField rescale(const PhaseField& u, double eps);

// (1/2) grad(kinetic)/h^n + W'(u): the discrete (-Delta)^s u - (u - u^3).
std::vector<double> frac_laplacian_residual(const PhaseField& u, double s, double R_t);

struct DescentOptions {
  int max_iters = 2000;
  double tol = 1e-10;  // relative energy decrease that ends the descent
  double R_t = 0.0;    // 0: window diagonal
  double eta0 = 0.0;   // 0: h^{2s}
};

struct DescentResult {
  PhaseField field;
  std::vector<double> energies;  // accepted iterates, starting with u0
  int iterations = 0;
  bool converged = false;
  double final_gradient = 0.0;  // sup norm of the projected L2 gradient
};

DescentResult minimize_G(const PhaseField& u0, double s, double eps, const DescentOptions& opt = {});

struct DensityRow {
  double R = 0.0;
  double measure = 0.0;
  double ratio = 0.0;
};

struct DensityReport {
  Vec2 center{};
  std::vector<DensityRow> rows;
  std::vector<Segment> interface;
};

DensityReport interface_and_density(const PhaseField& u, double theta1, double theta2,
                                    const std::vector<double>& radii, Vec2 center = {});

// Window cell centre nearest to x0 with u > theta; x0 itself if there is none.
Vec2 nearest_above(const PhaseField& u, Vec2 x0, double theta);

// Zero level set of u on the grid of cell centres (window cells only).
std::vector<Segment> zero_level(const PhaseField& u);

// Sup distance from the segment endpoints to the boundary line of a half-plane.
double interface_deviation(const std::vector<Segment>& segs, const HalfPlane& line);

}  // namespace fraclab
