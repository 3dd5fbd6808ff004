#pragma once

#include <vector>

#include "fraclab/shapes.hpp"

namespace fraclab {

struct ELOptions {
  int radii_per_decade = 64;
  int angles = 256;  // must be divisible by 4
  // Adds |value(rho0/2, 2x counts) - value| to the error estimate.
  bool refine_estimate = false;
};

struct ELValue {
  Vec2 x0{};
  double value = 0.0;
  double annulus = 0.0;  // rho0 <= |y| <= R_t
  double far = 0.0;      // |y| > R_t
  double rho0 = 0.0;
  double rt = 0.0;
  double error = 0.0;
};

ELValue el_integral(const ShapeSpec& spec, Vec2 x0, double s, double rho0, double R_t,
                    const ELOptions& opt = {});

std::vector<ELValue> el_profile(const ShapeSpec& spec, const std::vector<Vec2>& points, double s,
                                double rho0, double R_t, const ELOptions& opt = {});

}  // namespace fraclab
