#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

constexpr double kPi = std::numbers::pi;

enum class ErrorCode {
  InvalidArgument,
  SOutOfRange,
  EpsOutOfRange,
  ZeroOffset,
  UnsupportedShape,
  TooLarge,
  NotOnBoundary,
  BadRadii,
  CenterBelowTheta,
  TailUnavailable,
  NoProgress,
  OutOfMemory,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }
  // Numerical failures map to a different CLI exit status than bad input.
  bool numerical() const {
    return code_ == ErrorCode::NoProgress || code_ == ErrorCode::OutOfMemory;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Neumaier variant of compensated summation.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Surface measure of the unit sphere S^{n-1}; n=1 counts the two endpoints.
inline double omega(int n) { return n == 2 ? 2.0 * kPi : 2.0; }

// Thread cap: FRACLAB_THREADS if set, otherwise hardware concurrency.
int thread_count();

// Static block partition of [0,n); each index is visited exactly once.
// Callers write per-index results so output never depends on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Gauss-Legendre rule on [-1,1] (supported sizes: 4, 8, 16, 20, 32, 48, 64).
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_rule(int points);

// Integrates f over [a,b] with the given rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                       int points);

void require_s(double s, double lo, double hi, bool hi_open, const char* label);

}  // namespace fraclab
