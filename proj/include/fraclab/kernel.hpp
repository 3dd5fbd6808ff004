#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fraclab/common.hpp"
#include "fraclab/shapes.hpp"

namespace fraclab {

struct KernelConstants {
  int n = 2;
  double s = 0.25;
  double omega = 2 * kPi;  // |S^{n-1}|
  double c_n = 2 * kPi;    // s -> 0 constant, taken equal to omega
};

KernelConstants kernel_constants(int n, double s);

// Integral of |x-y|^{-(n+2s)} over the cell pair (C_0, C_offset) of side h.
// Offsets with sup-norm >= 4 use the midpoint rule. Closer offsets use exact
// cell-pair integrals (s < 1/2) obtained from the self-similar subdivision
// identity; for s >= 1/2 those integrals diverge and the midpoint rule is used.
double pair_weight(int di, int dj, double h, double s, int n);

// Exact cell-pair integral for unit cells via the tent-weighted overlap form;
// intended for well separated offsets (sup-norm >= 2).
double overlap_integral(int di, int dj, double s, int n);

// omega * R^{-2s} / (2s)
double tail(double R, double s, int n);

struct Offset {
  int di = 0;
  int dj = 0;
  double w = 0.0;
};

struct InteractionTable {
  int n = 2;
  double h = 1.0;
  double s = 0.25;
  double rt = 1.0;
  int M = 0;                    // offsets satisfy |di|,|dj| <= M
  std::vector<double> dense;    // (2M+1)^n, zero outside the disk and at 0
  std::vector<Offset> offsets;  // in-disk nonzero offsets, row-major (dj outer)
  double tau = 0.0;             // tail(rt, s, n)

  double weight(int di, int dj) const {
    if (di < -M || di > M || dj < -M || dj > M) return 0.0;
    if (n == 1) return dj == 0 ? dense[di + M] : 0.0;
    return dense[static_cast<std::size_t>(dj + M) * (2 * M + 1) + (di + M)];
  }
  // Tail mass carried by one cell: h^n * tau.
  double cell_tail() const { return (n == 2 ? h * h : h) * tau; }
};

constexpr std::size_t kDefaultOffsetCap = std::size_t{1} << 22;

InteractionTable build_table(int n, double h, double s, double R_t,
                             std::size_t cap = kDefaultOffsetCap);
inline InteractionTable build_table(const Window& w, double s, double R_t,
                                    std::size_t cap = kDefaultOffsetCap) {
  return build_table(w.dim(), w.h(), s, R_t, cap);
}

void save_table(const InteractionTable& t, const std::string& path);
// Returns false when the file is missing or keyed to different parameters.
bool load_table(const std::string& path, int n, double h, double s, double R_t,
                InteractionTable& out);

}  // namespace fraclab
