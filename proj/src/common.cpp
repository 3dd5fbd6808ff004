#include "fraclab/common.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace fraclab {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SOutOfRange: return "SOutOfRange";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::ZeroOffset: return "ZeroOffset";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::CenterBelowTheta: return "CenterBelowTheta";
    case ErrorCode::TailUnavailable: return "TailUnavailable";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::OutOfMemory: return "OutOfMemory";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("FRACLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

template <int N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0.0) continue;
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
  }
  if (N % 2 == 1) {
    r.x.push_back(0.0);
    r.w.push_back(w[0]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int points) {
  static const GaussRule r4 = make_rule<4>();
  static const GaussRule r8 = make_rule<8>();
  static const GaussRule r16 = make_rule<16>();
  static const GaussRule r20 = make_rule<20>();
  static const GaussRule r32 = make_rule<32>();
  static const GaussRule r48 = make_rule<48>();
  static const GaussRule r64 = make_rule<64>();
  switch (points) {
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    case 20: return r20;
    case 32: return r32;
    case 48: return r48;
    case 64: return r64;
    default: fail(ErrorCode::InvalidArgument, "unsupported Gauss rule size");
  }
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                       int points) {
  const GaussRule& g = gauss_rule(points);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  KahanSum acc;
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(mid + half * g.x[i]);
  return half * acc.value();
}

void require_s(double s, double lo, double hi, bool hi_open, const char* label) {
  const bool ok = s > lo && (hi_open ? s < hi : s <= hi);
  if (!ok || !std::isfinite(s))
    fail(ErrorCode::SOutOfRange, std::string("s must satisfy ") + label + ", got " +
                                     std::to_string(s));
}

}  // namespace fraclab
