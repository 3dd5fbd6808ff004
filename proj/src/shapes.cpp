#include "fraclab/shapes.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace fraclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a - kPi;
}

bool in_sector(Vec2 v, double bisector, double opening) {
  if (v.x == 0.0 && v.y == 0.0) return false;
  return std::abs(wrap_angle(std::atan2(v.y, v.x) - bisector)) < 0.5 * opening;
}

int osc_region(const OscillatingCone& o, double log_r) {
  return static_cast<int>(std::upper_bound(o.log_radii.begin(), o.log_radii.end(), log_r) -
                          o.log_radii.begin());
}

double osc_opening(const OscillatingCone& o, int region) {
  return region % 2 == 0 ? o.theta_small : o.theta_big;
}

bool raw_contains(const ShapeKind& kind, Vec2 p) {
  return std::visit(
      overloaded{
          [&](const HalfPlane& s) { return dot(s.normal, p) < s.offset; },
          [&](const Cone2D& s) { return in_sector(p - s.apex, s.bisector, s.opening); },
          [&](const CrossCone&) { return p.x * p.y > 0.0; },
          [&](const CrossConePlusSquare& s) {
            return p.x * p.y > 0.0 || (p.x > 0.0 && p.x < s.side && p.y < 0.0 && p.y > -s.side);
          },
          [&](const Ball& s) {
            const Vec2 d = p - s.center;
            return dot(d, d) < s.radius * s.radius;
          },
          [&](const RectUnion& s) {
            for (const Box& b : s.boxes)
              if (p.x > b.lo.x && p.x < b.hi.x && p.y > b.lo.y && p.y < b.hi.y) return true;
            return false;
          },
          [&](const OscillatingCone& s) {
            const double r = norm(p);
            if (r == 0.0) return false;
            return in_sector(p, s.bisector, osc_opening(s, osc_region(s, std::log(r))));
          },
          [&](const Whole&) { return true; },
          [&](const Empty&) { return false; },
      },
      kind);
}

// Boundary pieces used to locate where a sphere crosses the boundary.
struct Ray {
  Vec2 p;
  Vec2 d;  // unit
  double tmax;
};
struct Circle {
  Vec2 c;
  double r;
};

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

void add_segment(std::vector<Ray>& rays, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len = norm(d);
  if (len > 0) rays.push_back({a, (1.0 / len) * d, len});
}

void boundary_pieces(const ShapeKind& kind, std::vector<Ray>& rays, std::vector<Circle>& circles) {
  std::visit(overloaded{
                 [&](const HalfPlane& s) {
                   const Vec2 p = s.offset * s.normal;
                   const Vec2 t{-s.normal.y, s.normal.x};
                   rays.push_back({p, t, kInf});
                   rays.push_back({p, -1.0 * t, kInf});
                 },
                 [&](const Cone2D& s) {
                   rays.push_back({s.apex, unit(s.bisector + 0.5 * s.opening), kInf});
                   rays.push_back({s.apex, unit(s.bisector - 0.5 * s.opening), kInf});
                 },
                 [&](const CrossCone&) {
                   for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
                     rays.push_back({{0, 0}, d, kInf});
                 },
                 [&](const CrossConePlusSquare& s) {
                   for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}})
                     rays.push_back({{0, 0}, d, kInf});
                   add_segment(rays, {s.side, 0}, {s.side, -s.side});
                   add_segment(rays, {0, -s.side}, {s.side, -s.side});
                 },
                 [&](const Ball& s) { circles.push_back({s.center, s.radius}); },
                 [&](const RectUnion& s) {
                   for (const Box& b : s.boxes) {
                     add_segment(rays, b.lo, {b.hi.x, b.lo.y});
                     add_segment(rays, {b.hi.x, b.lo.y}, b.hi);
                     add_segment(rays, b.hi, {b.lo.x, b.hi.y});
                     add_segment(rays, {b.lo.x, b.hi.y}, b.lo);
                   }
                 },
                 [&](const OscillatingCone& s) {
                   for (double th : {s.theta_small, s.theta_big}) {
                     rays.push_back({{0, 0}, unit(s.bisector + 0.5 * th), kInf});
                     rays.push_back({{0, 0}, unit(s.bisector - 0.5 * th), kInf});
                   }
                   for (double t : s.log_radii)
                     if (t < 700) circles.push_back({{0, 0}, std::exp(t)});
                 },
                 [&](const Whole&) {},
                 [&](const Empty&) {},
             },
             kind);
}

double rect_union_area_in_disk(const RectUnion&, double) {
  fail(ErrorCode::UnsupportedShape, "rectangle unions have no closed-form local quantities");
}

// Area of {u < c} inside the disk of radius r, u a unit linear coordinate.
double half_plane_area(double c, double r) {
  if (c <= -r) return 0.0;
  if (c >= r) return kPi * r * r;
  return kPi * r * r - r * r * std::acos(c / r) + c * std::sqrt(r * r - c * c);
}

// Lens area of two disks (radii a, b) at centre distance d.
double lens_area(double a, double b, double d) {
  if (d >= a + b) return 0.0;
  if (d <= std::abs(a - b)) return kPi * std::min(a, b) * std::min(a, b);
  const double ca = std::clamp((d * d + a * a - b * b) / (2 * d * a), -1.0, 1.0);
  const double cb = std::clamp((d * d + b * b - a * a) / (2 * d * b), -1.0, 1.0);
  const double k = std::sqrt(std::max(0.0, (-d + a + b) * (d + a - b) * (d - a + b) * (d + a + b)));
  return a * a * std::acos(ca) + b * b * std::acos(cb) - 0.5 * k;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool ShapeSpec::contains(Vec2 p) const {
  if (dimension == 1) p.y = 0.0;
  return raw_contains(kind, p) != complement;
}

bool ShapeSpec::bounded() const {
  const bool b = std::holds_alternative<Ball>(kind) || std::holds_alternative<RectUnion>(kind) ||
                 std::holds_alternative<Empty>(kind);
  return b && !complement;
}

ShapeSpec complement_of(const ShapeSpec& s) {
  ShapeSpec c = s;
  c.complement = !s.complement;
  return c;
}

Vec2 rotate_quarter(Vec2 p, int turns) {
  turns = ((turns % 4) + 4) % 4;
  for (int k = 0; k < turns; ++k) p = {-p.y, p.x};
  return p;
}

ShapeSpec rotate_quarter(const ShapeSpec& s, int turns) {
  turns = ((turns % 4) + 4) % 4;
  ShapeSpec out = s;
  const double dphi = turns * kPi / 2;
  std::visit(overloaded{
                 [&](const HalfPlane& h) {
                   out.kind = HalfPlane{rotate_quarter(h.normal, turns), h.offset};
                 },
                 [&](const Cone2D& c) {
                   out.kind = Cone2D{rotate_quarter(c.apex, turns), c.bisector + dphi, c.opening};
                 },
                 [&](const CrossCone&) {
                   if (turns % 2 == 1) out.complement = !s.complement;
                 },
                 [&](const CrossConePlusSquare&) {
                   if (turns != 0)
                     fail(ErrorCode::UnsupportedShape, "rotated crosscone+sq is not representable");
                 },
                 [&](const Ball& b) { out.kind = Ball{rotate_quarter(b.center, turns), b.radius}; },
                 [&](const RectUnion& r) {
                   RectUnion rr;
                   for (const Box& b : r.boxes) {
                     const Vec2 p = rotate_quarter(b.lo, turns), q = rotate_quarter(b.hi, turns);
                     rr.boxes.push_back({{std::min(p.x, q.x), std::min(p.y, q.y)},
                                         {std::max(p.x, q.x), std::max(p.y, q.y)}});
                   }
                   out.kind = rr;
                 },
                 [&](const OscillatingCone& o) {
                   OscillatingCone oo = o;
                   oo.bisector += dphi;
                   out.kind = oo;
                 },
                 [&](const Whole&) {},
                 [&](const Empty&) {},
             },
             s.kind);
  return out;
}

ShapeSpec scale_shape(const ShapeSpec& s, double f) {
  if (!(f > 0)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
  ShapeSpec out = s;
  std::visit(overloaded{
                 [&](const HalfPlane& h) { out.kind = HalfPlane{h.normal, h.offset * f}; },
                 [&](const Cone2D& c) { out.kind = Cone2D{f * c.apex, c.bisector, c.opening}; },
                 [&](const CrossCone&) {},
                 [&](const CrossConePlusSquare& c) { out.kind = CrossConePlusSquare{c.side * f}; },
                 [&](const Ball& b) { out.kind = Ball{f * b.center, b.radius * f}; },
                 [&](const RectUnion& r) {
                   RectUnion rr;
                   for (const Box& b : r.boxes) rr.boxes.push_back({f * b.lo, f * b.hi});
                   out.kind = rr;
                 },
                 [&](const OscillatingCone& o) {
                   OscillatingCone oo = o;
                   for (double& t : oo.log_radii) t += std::log(f);
                   out.kind = oo;
                 },
                 [&](const Whole&) {},
                 [&](const Empty&) {},
             },
             s.kind);
  return out;
}

double Density::value() const {
  if (!defined()) fail(ErrorCode::TailUnavailable, "asymptotic density is not defined");
  return lo;
}

Density asymptotic_density(const ShapeSpec& s) {
  Density d = std::visit(
      overloaded{
          [](const HalfPlane&) { return Density{0.5, 0.5}; },
          [](const Cone2D& c) {
            const double v = c.opening / (2 * kPi);
            return Density{v, v};
          },
          [](const CrossCone&) { return Density{0.5, 0.5}; },
          [](const CrossConePlusSquare&) { return Density{0.5, 0.5}; },
          [](const Ball&) { return Density{0.0, 0.0}; },
          [](const RectUnion&) { return Density{0.0, 0.0}; },
          [](const OscillatingCone& o) {
            const double a = o.theta_small / (2 * kPi), b = o.theta_big / (2 * kPi);
            return Density{std::min(a, b), std::max(a, b)};
          },
          [](const Whole&) { return Density{1.0, 1.0}; },
          [](const Empty&) { return Density{0.0, 0.0}; },
      },
      s.kind);
  if (s.dimension == 1 && std::holds_alternative<HalfPlane>(s.kind)) {
    const auto& hp = std::get<HalfPlane>(s.kind);
    const double v = hp.normal.x == 0.0 ? (hp.offset > 0 ? 1.0 : 0.0) : 0.5;
    d = {v, v};
  }
  if (s.complement) d = {1.0 - d.hi, 1.0 - d.lo};
  return d;
}

LocalQuantities exact_local_quantities(const ShapeSpec& s, double r) {
  if (!(r > 0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  LocalQuantities q;
  if (s.dimension == 1) {
    const auto* hp = std::get_if<HalfPlane>(&s.kind);
    if (!hp || hp->normal.x == 0.0)
      fail(ErrorCode::UnsupportedShape, "1D local quantities need a half-line");
    const double x0 = hp->offset / hp->normal.x;
    const bool left_in = hp->normal.x > 0;
    const double xc = std::clamp(x0, -r, r);
    q.perimeter_in_Br = std::abs(x0) < r ? 1.0 : 0.0;
    q.measure_E_in_Br = left_in ? xc + r : r - xc;
    q.measure_complement_in_Br = 2 * r - q.measure_E_in_Br;
  } else {
    const double disk = kPi * r * r;
    std::visit(
        overloaded{
            [&](const HalfPlane& h) {
              const double c = h.offset;
              q.perimeter_in_Br = std::abs(c) < r ? 2 * std::sqrt(r * r - c * c) : 0.0;
              q.measure_E_in_Br = half_plane_area(c, r);
            },
            [&](const Cone2D& c) {
              if (c.apex.x != 0.0 || c.apex.y != 0.0)
                fail(ErrorCode::UnsupportedShape, "cone local quantities need apex at origin");
              q.perimeter_in_Br = 2 * r;
              q.measure_E_in_Br = 0.5 * c.opening * r * r;
            },
            [&](const CrossCone&) {
              q.perimeter_in_Br = 4 * r;
              q.measure_E_in_Br = 0.5 * disk;
            },
            [&](const CrossConePlusSquare& c) {
              if (c.side * std::sqrt(2.0) >= r)
                fail(ErrorCode::UnsupportedShape, "square not inside B_r");
              q.perimeter_in_Br = 4 * r;
              q.measure_E_in_Br = 0.5 * disk + c.side * c.side;
            },
            [&](const Ball& b) {
              const double d = norm(b.center), rho = b.radius;
              if (d + rho <= r)
                q.perimeter_in_Br = 2 * kPi * rho;
              else if (d >= r + rho || rho >= d + r)
                q.perimeter_in_Br = 0.0;
              else
                q.perimeter_in_Br =
                    2 * rho * std::acos(std::clamp((d * d + rho * rho - r * r) / (2 * d * rho), -1.0, 1.0));
              q.measure_E_in_Br = lens_area(r, rho, d);
            },
            [&](const RectUnion& u) { q.measure_E_in_Br = rect_union_area_in_disk(u, r); },
            [&](const OscillatingCone&) {
              fail(ErrorCode::UnsupportedShape, "oscillating cone has no closed-form local quantities");
            },
            [&](const Whole&) { q.measure_E_in_Br = disk; },
            [&](const Empty&) { q.measure_E_in_Br = 0.0; },
        },
        s.kind);
    q.measure_complement_in_Br = disk - q.measure_E_in_Br;
  }
  if (s.complement) std::swap(q.measure_E_in_Br, q.measure_complement_in_Br);
  return q;
}

double sphere_fraction(const ShapeSpec& s, Vec2 x, double r) {
  if (s.dimension == 1) {
    return 0.5 * ((s.contains({x.x - r, 0}) ? 1.0 : 0.0) + (s.contains({x.x + r, 0}) ? 1.0 : 0.0));
  }
  std::vector<Ray> rays;
  std::vector<Circle> circles;
  boundary_pieces(s.kind, rays, circles);
  std::vector<double> ang;
  for (const Ray& ray : rays) {
    const Vec2 q = ray.p - x;
    const double b = dot(ray.d, q), c = dot(q, q) - r * r;
    const double disc = b * b - c;
    if (disc <= 0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {-b - sq, -b + sq}) {
      if (t < 0 || t > ray.tmax) continue;
      const Vec2 p = q + t * ray.d;
      ang.push_back(std::atan2(p.y, p.x));
    }
  }
  for (const Circle& ci : circles) {
    const Vec2 dc = ci.c - x;
    const double d = norm(dc);
    if (d == 0.0 || d >= r + ci.r || d <= std::abs(r - ci.r)) continue;
    const double a = (r * r - ci.r * ci.r + d * d) / (2 * d);
    const double half = std::acos(std::clamp(a / r, -1.0, 1.0));
    const double base = std::atan2(dc.y, dc.x);
    ang.push_back(wrap_angle(base + half));
    ang.push_back(wrap_angle(base - half));
  }
  auto member = [&](double phi) { return s.contains({x.x + r * std::cos(phi), x.y + r * std::sin(phi)}); };
  if (ang.empty()) return member(0.0) ? 1.0 : 0.0;
  std::sort(ang.begin(), ang.end());
  KahanSum inside;
  for (std::size_t k = 0; k < ang.size(); ++k) {
    const double a0 = ang[k];
    const double a1 = k + 1 < ang.size() ? ang[k + 1] : ang[0] + 2 * kPi;
    if (a1 - a0 <= 0) continue;
    if (member(0.5 * (a0 + a1))) inside += a1 - a0;
  }
  return inside.value() / (2 * kPi);
}

double occupancy_beyond(const ShapeSpec& s, Vec2 x, double R, double sexp) {
  if (!(R > 0) || !(sexp > 0)) fail(ErrorCode::InvalidArgument, "occupancy needs R>0, s>0");
  const double two_s = 2 * sexp;
  if (const auto* o = std::get_if<OscillatingCone>(&s.kind); o && s.dimension == 2) {
    // Far field seen from the origin: piecewise-constant angular profile.
    const double lr = std::log(R);
    int region = osc_region(*o, lr);
    double v_hi = 1.0;
    KahanSum acc;
    for (std::size_t k = region; k <= o->log_radii.size(); ++k) {
      const double v_lo = k < o->log_radii.size() ? std::exp(two_s * (lr - o->log_radii[k])) : 0.0;
      double frac = osc_opening(*o, static_cast<int>(k)) / (2 * kPi);
      if (s.complement) frac = 1.0 - frac;
      acc += frac * (v_hi - v_lo);
      v_hi = v_lo;
    }
    return acc.value();
  }
  const Density dens = asymptotic_density(s);
  // Radii where the sphere fraction is not smooth.
  std::vector<double> breaks;
  if (s.dimension == 2) {
    std::vector<Ray> rays;
    std::vector<Circle> circles;
    boundary_pieces(s.kind, rays, circles);
    for (const Ray& ray : rays) {
      breaks.push_back(norm(ray.p - x));
      if (std::isfinite(ray.tmax)) breaks.push_back(norm(ray.p + ray.tmax * ray.d - x));
      const double t = dot(ray.d, x - ray.p);
      if (t > 0 && t < ray.tmax) breaks.push_back(norm(ray.p + t * ray.d - x));
    }
    for (const Circle& c : circles) {
      const double d = norm(c.c - x);
      breaks.push_back(std::abs(d - c.r));
      breaks.push_back(d + c.r);
    }
  } else {
    std::vector<Ray> rays;
    std::vector<Circle> circles;
    boundary_pieces(s.kind, rays, circles);
    for (const Ray& ray : rays) {
      if (ray.d.y == 0.0) continue;
      const double t = -ray.p.y / ray.d.y;
      if (t >= 0 && t <= ray.tmax) breaks.push_back(std::abs(ray.p.x + t * ray.d.x - x.x));
    }
    for (const Circle& c : circles) {
      if (std::abs(c.c.y) < c.r) {
        const double w = std::sqrt(c.r * c.r - c.c.y * c.c.y);
        breaks.push_back(std::abs(c.c.x - w - x.x));
        breaks.push_back(std::abs(c.c.x + w - x.x));
      }
    }
  }
  std::vector<double> vb{0.0, 1.0};
  for (double b : breaks)
    if (b > R) vb.push_back(std::pow(R / b, two_s));
  std::sort(vb.begin(), vb.end());
  vb.erase(std::unique(vb.begin(), vb.end()), vb.end());
  const double lR = std::log(R);
  auto frac = [&](double v) {
    const double lr = lR - std::log(v) / two_s;
    if (lr > 600.0 && dens.defined()) return dens.lo;
    return sphere_fraction(s, x, std::exp(std::min(lr, 600.0)));
  };
  KahanSum acc;
  for (std::size_t k = 0; k + 1 < vb.size(); ++k) {
    if (vb[k + 1] - vb[k] < 1e-300) continue;
    acc += gauss_integrate(frac, vb[k], vb[k + 1], 32);
  }
  return acc.value();
}

Window::Window(int dim, Vec2 lower, Vec2 upper, double h) : dim_(dim), lower_(lower), h_(h) {
  if (dim != 1 && dim != 2) fail(ErrorCode::InvalidArgument, "window dimension must be 1 or 2");
  if (!(h > 0) || !std::isfinite(h)) fail(ErrorCode::InvalidArgument, "window resolution must be positive");
  auto count = [&](double a, double b) {
    const double len = b - a;
    const double n = std::round(len / h);
    if (!(len > 0) || std::abs(n * h - len) > 1e-9 * std::max(1.0, len))
      fail(ErrorCode::InvalidArgument, "window side must be an integer multiple of h");
    if (n < 2) fail(ErrorCode::InvalidArgument, "window needs at least 2 cells per axis");
    return static_cast<int>(n);
  };
  nx_ = count(lower.x, upper.x);
  if (dim == 2) {
    ny_ = count(lower.y, upper.y);
  } else {
    ny_ = 1;
    lower_.y = -0.5 * h;
  }
}

Vec2 Window::upper() const { return {lower_.x + nx_ * h_, dim_ == 2 ? lower_.y + ny_ * h_ : 0.0}; }

Vec2 Window::center(int i, int j) const {
  return {lower_.x + (i + 0.5) * h_, dim_ == 2 ? lower_.y + (j + 0.5) * h_ : 0.0};
}

void Window::locate(Vec2 p, int& i, int& j) const {
  i = static_cast<int>(std::floor((p.x - lower_.x) / h_));
  j = dim_ == 2 ? static_cast<int>(std::floor((p.y - lower_.y) / h_)) : 0;
}

bool GridSet::at(int i, int j) const {
  if (window.inside(i, j)) return mask[window.index(i, j)] != 0;
  return exterior.contains(window.center(i, j));
}

std::size_t GridSet::popcount() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

GridSet rasterize(const ShapeSpec& spec, const Window& window) {
  GridSet g{window, std::vector<std::uint8_t>(window.cells()), spec};
  for (int j = 0; j < window.ny(); ++j)
    for (int i = 0; i < window.nx(); ++i)
      g.mask[window.index(i, j)] = spec.contains(window.center(i, j)) ? 1 : 0;
  return g;
}

namespace {

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, '/')) {
    std::size_t used = 0;
    double d = 0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      fail(ErrorCode::InvalidArgument, "bad number '" + item + "' in shape string");
    out.push_back(d);
  }
  return out;
}

}  // namespace

ShapeSpec parse_shape(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::multimap<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail(ErrorCode::InvalidArgument, "expected key=value in '" + item + "'");
      kv.emplace(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  std::map<std::string, bool> used;
  auto num = [&](const std::string& key, double def) {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    used[key] = true;
    const auto v = parse_list(it->second);
    if (v.size() != 1) fail(ErrorCode::InvalidArgument, "key '" + key + "' expects one number");
    return v[0];
  };
  ShapeSpec s;
  if (kind == "halfplane") {
    Vec2 n{num("nx", 0.0), num("ny", 1.0)};
    const double len = norm(n);
    if (len == 0) fail(ErrorCode::InvalidArgument, "half-plane normal must be nonzero");
    s.kind = HalfPlane{(1.0 / len) * n, num("c", 0.0)};
  } else if (kind == "cone") {
    Cone2D c;
    c.opening = num("opening", kPi / 2);
    c.bisector = num("bisector", c.bisector);
    c.apex = {num("ax", 0.0), num("ay", 0.0)};
    if (!(c.opening > 0 && c.opening < 2 * kPi))
      fail(ErrorCode::InvalidArgument, "cone opening must lie in (0, 2pi)");
    s.kind = c;
  } else if (kind == "crosscone") {
    s.kind = CrossCone{};
  } else if (kind == "crosscone+sq") {
    const double l = num("l", 0.0625);
    if (!(l > 0)) fail(ErrorCode::InvalidArgument, "square side must be positive");
    s.kind = CrossConePlusSquare{l};
  } else if (kind == "ball") {
    const double r = num("r", 1.0);
    if (!(r > 0)) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
    s.kind = Ball{{num("cx", 0.0), num("cy", 0.0)}, r};
  } else if (kind == "rect") {
    RectUnion u;
    auto range = kv.equal_range("box");
    for (auto it = range.first; it != range.second; ++it) {
      const auto v = parse_list(it->second);
      if (v.size() != 4 || v[2] <= v[0] || v[3] <= v[1])
        fail(ErrorCode::InvalidArgument, "box expects x0/y0/x1/y1 with x0<x1, y0<y1");
      u.boxes.push_back({{v[0], v[1]}, {v[2], v[3]}});
    }
    used["box"] = true;
    s.kind = u;
  } else if (kind == "osc") {
    OscillatingCone o;
    o.theta_small = num("small", o.theta_small);
    o.theta_big = num("big", o.theta_big);
    o.bisector = num("bisector", o.bisector);
    if (auto it = kv.find("logr"); it != kv.end()) {
      used["logr"] = true;
      o.log_radii = parse_list(it->second);
      if (!std::is_sorted(o.log_radii.begin(), o.log_radii.end()) ||
          std::adjacent_find(o.log_radii.begin(), o.log_radii.end()) != o.log_radii.end())
        fail(ErrorCode::InvalidArgument, "log radii must be strictly increasing");
    }
    s.kind = o;
  } else if (kind == "whole") {
    s.kind = Whole{};
  } else if (kind == "empty") {
    s.kind = Empty{};
  } else {
    fail(ErrorCode::InvalidArgument, "unknown shape kind '" + kind + "'");
  }
  s.complement = num("complement", 0.0) != 0.0;
  const double dim = num("dim", 2.0);
  if (dim != 1.0 && dim != 2.0) fail(ErrorCode::InvalidArgument, "dim must be 1 or 2");
  s.dimension = static_cast<int>(dim);
  for (const auto& [k, v] : kv)
    if (!used.count(k)) fail(ErrorCode::InvalidArgument, "unknown shape key '" + k + "'");
  return s;
}

std::string format_shape(const ShapeSpec& s) {
  std::vector<std::string> kv;
  std::string kind = std::visit(
      overloaded{
          [&](const HalfPlane& h) {
            kv = {"nx=" + fmt_num(h.normal.x), "ny=" + fmt_num(h.normal.y), "c=" + fmt_num(h.offset)};
            return std::string("halfplane");
          },
          [&](const Cone2D& c) {
            kv = {"opening=" + fmt_num(c.opening), "bisector=" + fmt_num(c.bisector),
                  "ax=" + fmt_num(c.apex.x), "ay=" + fmt_num(c.apex.y)};
            return std::string("cone");
          },
          [&](const CrossCone&) { return std::string("crosscone"); },
          [&](const CrossConePlusSquare& c) {
            kv = {"l=" + fmt_num(c.side)};
            return std::string("crosscone+sq");
          },
          [&](const Ball& b) {
            kv = {"r=" + fmt_num(b.radius), "cx=" + fmt_num(b.center.x), "cy=" + fmt_num(b.center.y)};
            return std::string("ball");
          },
          [&](const RectUnion& u) {
            for (const Box& b : u.boxes)
              kv.push_back("box=" + fmt_num(b.lo.x) + "/" + fmt_num(b.lo.y) + "/" + fmt_num(b.hi.x) +
                           "/" + fmt_num(b.hi.y));
            return std::string("rect");
          },
          [&](const OscillatingCone& o) {
            std::string l;
            for (std::size_t k = 0; k < o.log_radii.size(); ++k)
              l += (k ? "/" : "") + fmt_num(o.log_radii[k]);
            kv = {"small=" + fmt_num(o.theta_small), "big=" + fmt_num(o.theta_big),
                  "bisector=" + fmt_num(o.bisector), "logr=" + l};
            return std::string("osc");
          },
          [&](const Whole&) { return std::string("whole"); },
          [&](const Empty&) { return std::string("empty"); },
      },
      s.kind);
  if (s.complement) kv.push_back("complement=1");
  if (s.dimension == 1) kv.push_back("dim=1");
  std::string out = kind;
  for (std::size_t k = 0; k < kv.size(); ++k) out += (k ? "," : ":") + kv[k];
  return out;
}

void write_pgm(std::ostream& out, const GridSet& g) {
  const Window& w = g.window;
  out << "P2\n" << w.nx() << ' ' << w.ny() << "\n1\n";
  for (int j = w.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < w.nx(); ++i) out << (i ? " " : "") << int(g.mask[w.index(i, j)]);
    out << '\n';
  }
}

}  // namespace fraclab
