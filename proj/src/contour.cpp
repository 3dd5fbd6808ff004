#include "fraclab/contour.hpp"

#include <algorithm>

namespace fraclab {

std::vector<Segment> marching_squares(const std::vector<double>& f, int nx, int ny, Vec2 origin,
                                      double h, double level) {
  std::vector<Segment> out;
  auto node = [&](int i, int j) { return Vec2{origin.x + i * h, origin.y + j * h}; };
  auto lerp = [&](Vec2 p, Vec2 q, double fp, double fq) {
    const double t = (level - fp) / (fq - fp);
    return Vec2{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
  };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      // Corners counter-clockwise from bottom-left.
      const Vec2 P[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      const double F[4] = {f[j * nx + i], f[j * nx + i + 1], f[(j + 1) * nx + i + 1], f[(j + 1) * nx + i]};
      int code = 0;
      for (int k = 0; k < 4; ++k)
        if (F[k] > level) code |= 1 << k;
      if (code == 0 || code == 15) continue;
      // Edge k joins corner k and k+1.
      auto edge = [&](int k) { return lerp(P[k], P[(k + 1) % 4], F[k], F[(k + 1) % 4]); };
      std::vector<int> cut;
      for (int k = 0; k < 4; ++k) {
        const bool a = (code >> k) & 1, b = (code >> ((k + 1) % 4)) & 1;
        if (a != b) cut.push_back(k);
      }
      if (cut.size() == 2) {
        out.push_back({edge(cut[0]), edge(cut[1])});
      } else {
        // Saddle: corners 0,2 share one state, 1,3 the other.
        const double avg = 0.25 * (F[0] + F[1] + F[2] + F[3]);
        const bool center_hi = avg > level;
        const bool c0_hi = code & 1;
        if (center_hi == c0_hi) {
          out.push_back({edge(0), edge(1)});
          out.push_back({edge(2), edge(3)});
        } else {
          out.push_back({edge(3), edge(0)});
          out.push_back({edge(1), edge(2)});
        }
      }
    }
  return out;
}

double length_in_disk(const Segment& seg, Vec2 c, double r) {
  const Vec2 d = seg.b - seg.a, q = seg.a - c;
  const double len2 = dot(d, d);
  if (len2 == 0) return 0.0;
  // |q + t d|^2 < r^2 for t in (t0, t1)
  const double b = dot(q, d) / len2, cc = (dot(q, q) - r * r) / len2;
  const double disc = b * b - cc;
  if (disc <= 0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, -b - sq), t1 = std::min(1.0, -b + sq);
  return t1 > t0 ? (t1 - t0) * std::sqrt(len2) : 0.0;
}

}  // namespace fraclab
