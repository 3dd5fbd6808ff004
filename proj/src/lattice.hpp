#pragma once

#include <cstdint>
#include <vector>

#include "fraclab/shapes.hpp"

namespace fraclab::detail {

// Labels of the window plus a margin of M cells; margin cells follow the
// exterior shape.
struct LabelLattice {
  int M = 0;
  int ex = 0;
  int oy = 0;
  std::vector<std::uint8_t> lab;

  std::uint8_t at(int i, int j) const {
    return lab[static_cast<std::size_t>(j + oy) * ex + (i + M)];
  }
};

inline LabelLattice make_lattice(const GridSet& g, int M) {
  const Window& w = g.window;
  LabelLattice L;
  L.M = M;
  L.ex = w.nx() + 2 * M;
  L.oy = w.dim() == 2 ? M : 0;
  const int ey = w.dim() == 2 ? w.ny() + 2 * M : 1;
  L.lab.resize(static_cast<std::size_t>(L.ex) * ey);
  for (int j = -L.oy; j < ey - L.oy; ++j)
    for (int i = -M; i < w.nx() + M; ++i)
      L.lab[static_cast<std::size_t>(j + L.oy) * L.ex + (i + M)] = g.at(i, j) ? 1 : 0;
  return L;
}

}  // namespace fraclab::detail
