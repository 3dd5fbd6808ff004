#pragma once

#include <cstdint>
#include <vector>

#include "fraclab/kernel.hpp"
#include "fraclab/report.hpp"
#include "fraclab/shapes.hpp"

namespace fraclab {

// The open set U: the whole window, or the window cells whose centres lie in
// a ball.
struct Domain {
  bool whole_window = true;
  Vec2 center{};
  double radius = 0.0;

  static Domain window() { return {}; }
  static Domain ball(double r, Vec2 c = {}) { return {false, c, r}; }
  bool contains(Vec2 p) const {
    if (whole_window) return true;
    const Vec2 d = p - center;
    return dot(d, d) < radius * radius;
  }
};

std::vector<std::uint8_t> domain_mask(const Window& w, const Domain& U);

struct PerimeterValue {
  double total = 0.0;
  double e1o1 = 0.0;  // I(E', O')
  double e1o2 = 0.0;  // I(E', O'')
  double e2o1 = 0.0;  // I(E'', O')
  double rt = 0.0;
  double tail = 0.0;  // part of total carried by the analytic tails
  double tail_share = 0.0;
};

struct PerimeterOptions {
  bool tails = true;
};

PerimeterValue frac_perimeter(const GridSet& set, double s, double R_t,
                              const Domain& U = Domain::window(), PerimeterOptions opt = {});
PerimeterValue frac_perimeter(const GridSet& set, const InteractionTable& table,
                              const Domain& U = Domain::window(), PerimeterOptions opt = {});

// Real field on the window, zero outside it.
struct ScalarField {
  Window window;
  std::vector<double> values;
};

// Ordered double sum of |u(x)-u(y)|^2 |x-y|^{-n-2s}. R_t is raised to cover the
// whole window so that every window pair is counted explicitly.
double gagliardo_seminorm_sq(const ScalarField& u, double s, double R_t);

// Exact when the exterior shape has closed-form geometry, otherwise the
// marching-squares length of the 3x3-smoothed mask inside B_r.
double classical_perimeter(const GridSet& set, double r);
double contour_perimeter(const GridSet& set, double r);

std::vector<double> a_of_E(const ShapeSpec& spec, const std::vector<double>& s_list);

enum class LimitMode { ToHalf, ToZero };

// Columns s,per_s,scaled,target,rel_err,tail_share. Metadata carries the
// extrapolated limit (least-squares line through the last three rows in
// 1-2s or s) and its error against the analytic target.
SweepReport scaled_limits(const ShapeSpec& spec, const Window& window, double r,
                          const std::vector<double>& s_list, LimitMode mode, double R_t);

}  // namespace fraclab
