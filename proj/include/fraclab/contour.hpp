#pragma once

#include <vector>

#include "fraclab/common.hpp"

namespace fraclab {

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Level set of node values f (row-major, nx by ny nodes at origin + (i,j)h)
// by marching squares with linear interpolation; saddles resolved by the
// square average.
std::vector<Segment> marching_squares(const std::vector<double>& f, int nx, int ny, Vec2 origin,
                                      double h, double level);

// Length of the part of the segment inside the open disk B_r(c).
double length_in_disk(const Segment& seg, Vec2 c, double r);

}  // namespace fraclab
