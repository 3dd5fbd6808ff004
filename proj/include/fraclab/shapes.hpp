#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fraclab/common.hpp"

namespace fraclab {

// E = {x : normal . x < offset}
struct HalfPlane {
  Vec2 normal{0.0, 1.0};
  double offset = 0.0;
};

// Points whose angle to the bisector is below opening/2.
struct Cone2D {
  Vec2 apex{};
  double bisector = 0.0;
  double opening = kPi / 2;
};

// {xy > 0}
struct CrossCone {};

// {xy > 0} plus the square (0,side) x (-side,0) in the fourth quadrant.
struct CrossConePlusSquare {
  double side = 0.0625;
};

struct Ball {
  Vec2 center{};
  double radius = 1.0;
};

struct Box {
  Vec2 lo{};
  Vec2 hi{};
};

struct RectUnion {
  std::vector<Box> boxes;
};

// Annuli |x| in [e^{T_{k-1}}, e^{T_k}) alternate between a narrow cone
// (even k, including the inner disk) and a wide one (odd k). Radii are
// stored as logarithms so that very large annuli stay representable.
struct OscillatingCone {
  std::vector<double> log_radii{0.5, 8.0, 128.0, 2048.0};
  double theta_small = kPi / 6;
  double theta_big = 11 * kPi / 6;
  double bisector = kPi / 2;
};

struct Whole {};
struct Empty {};

using ShapeKind = std::variant<HalfPlane, Cone2D, CrossCone, CrossConePlusSquare, Ball,
                               RectUnion, OscillatingCone, Whole, Empty>;

struct ShapeSpec {
  ShapeKind kind = HalfPlane{};
  bool complement = false;
  int dimension = 2;

  bool contains(Vec2 p) const;
  bool bounded() const;
};

ShapeSpec complement_of(const ShapeSpec& s);
// Exact quarter-turn rotation about the origin, applied `turns` times.
ShapeSpec rotate_quarter(const ShapeSpec& s, int turns);
Vec2 rotate_quarter(Vec2 p, int turns);
// Image of the set under x -> factor * x.
ShapeSpec scale_shape(const ShapeSpec& s, double factor);

struct Density {
  double lo = 0.0;
  double hi = 0.0;
  bool defined() const { return lo == hi; }
  double value() const;
};

Density asymptotic_density(const ShapeSpec& s);

struct LocalQuantities {
  double perimeter_in_Br = 0.0;
  double measure_E_in_Br = 0.0;
  double measure_complement_in_Br = 0.0;
};

// Quantities inside B_r centred at the origin.
LocalQuantities exact_local_quantities(const ShapeSpec& s, double r);

// Fraction of the sphere of radius r about x lying in E (n=1: of the two points).
double sphere_fraction(const ShapeSpec& s, Vec2 x, double r);

// (2s R^{2s}/omega) * integral over |y-x|>R of chi_E(y)|y-x|^{-n-2s}:
// the share of the far-field tail that falls inside E.
double occupancy_beyond(const ShapeSpec& s, Vec2 x, double R, double sexp);

class Window {
 public:
  Window() = default;
  // 2D window [lower, upper]; 1D window uses only the x components.
  Window(int dim, Vec2 lower, Vec2 upper, double h);
  static Window square(double half_width, double h) {
    return Window(2, {-half_width, -half_width}, {half_width, half_width}, h);
  }
  static Window interval(double a, double b, double h) { return Window(1, {a, 0}, {b, 0}, h); }

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  Vec2 lower() const { return lower_; }
  Vec2 upper() const;
  std::size_t cells() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  // Lattice cell centre; (i,j) may lie outside the window.
  Vec2 center(int i, int j) const;
  double cell_volume() const { return dim_ == 2 ? h_ * h_ : h_; }
  // Lattice cell containing p (rounded to nearest centre).
  void locate(Vec2 p, int& i, int& j) const;

 private:
  int dim_ = 2;
  Vec2 lower_{};
  double h_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
};

struct GridSet {
  Window window;
  std::vector<std::uint8_t> mask;
  ShapeSpec exterior;

  // Window cells read the mask, all other lattice cells the exterior shape.
  bool at(int i, int j) const;
  std::size_t popcount() const;
};

GridSet rasterize(const ShapeSpec& spec, const Window& window);

// Grammar: kind[:key=value,...]; lists use '/' separators; any kind accepts
// complement=1 and dim=1.
ShapeSpec parse_shape(const std::string& text);
std::string format_shape(const ShapeSpec& s);

void write_pgm(std::ostream& out, const GridSet& g);

}  // namespace fraclab
