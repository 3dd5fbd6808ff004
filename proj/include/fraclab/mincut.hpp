#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/kernel.hpp"
#include "fraclab/shapes.hpp"

namespace fraclab {

using Mask = std::vector<std::uint8_t>;

struct CutProblem {
  Window window;
  double s = 0.25;
  double rt = 0.0;
  ShapeSpec exterior;
  InteractionTable table;
  std::vector<double> cost_in;   // interactions of an IN cell with exterior complement
  std::vector<double> cost_out;  // interactions of an OUT cell with exterior E
  // Mass of pairs between window cells farther apart than R_t, per cell;
  // those pairs are only seen through the exterior-labelled tail.
  std::vector<double> unseen_pairs;
  double constant = 0.0;  // exterior-exterior pairs never enter

  double objective(const Mask& m) const;
  // Objective change when cell a switches label.
  double flip_delta(const Mask& m, std::size_t a) const;
};

CutProblem build_problem(const ShapeSpec& exterior, const Window& window, double s, double R_t);

struct MinimizeResult {
  Mask mask;
  double objective = 0.0;
  std::string method;
  double flow_value = 0.0;       // maxflow only
  double certificate_gap = 0.0;  // |objective - flow| / objective
  std::string tie_break = "out";
  std::vector<double> trace;  // flip-descent objectives after each accepted flip
};

constexpr std::size_t kDefaultCellCap = 4096;

MinimizeResult minimize_exact(const CutProblem& p, std::size_t cap = kDefaultCellCap);
// Exhaustive enumeration, up to 20 cells.
MinimizeResult minimize_brute(const CutProblem& p);
MinimizeResult flip_descent(const CutProblem& p, Mask init, std::uint64_t seed);

// Upper bound on how much truncating at R_t can shift objective(a) - objective(b).
double truncation_bound(const CutProblem& p, const Mask& a, const Mask& b);

}  // namespace fraclab
