#include "fraclab/kernel.hpp"

#include <Eigen/Dense>

#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

namespace fraclab {

KernelConstants kernel_constants(int n, double s) {
  if (n != 1 && n != 2) fail(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  require_s(s, 0.0, 1.0, true, "s in (0,1)");
  const double w = omega(n);
  return {n, s, w, w};
}

double tail(double R, double s, int n) {
  if (!(R > 0)) fail(ErrorCode::InvalidArgument, "tail radius must be positive");
  require_s(s, 0.0, 1.0, true, "s in (0,1)");
  return omega(n) * std::pow(R, -2 * s) / (2 * s);
}

double overlap_integral(int di, int dj, double s, int n) {
  const double p = n + 2 * s;
  const GaussRule& g = gauss_rule(16);
  // Tent weight (1-|z|) on [-1,1], split at the kink.
  auto axis = [&](auto&& inner) {
    KahanSum acc;
    for (int side = 0; side < 2; ++side) {
      const double a = side == 0 ? -1.0 : 0.0;
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        const double z = a + 0.5 * (g.x[k] + 1.0);
        acc += 0.5 * g.w[k] * (1.0 - std::abs(z)) * inner(z);
      }
    }
    return acc.value();
  };
  if (n == 1) return axis([&](double z) { return std::pow(std::abs(di + z), -p); });
  return axis([&](double zx) {
    return axis([&](double zy) {
      const double x = di + zx, y = dj + zy;
      return std::pow(x * x + y * y, -0.5 * p);
    });
  });
}

namespace {

constexpr int kNear = 3;  // near-field unknowns: 0 < sup-norm <= 3

int near_index(int di, int dj, int n) {
  return n == 1 ? di + kNear : (dj + kNear) * (2 * kNear + 1) + (di + kNear);
}

// Unit-cell integrals for all offsets with sup-norm <= 3. Subdividing both
// cells once gives W(o) = 2^{-(n-2s)} sum_{d1,d2} W(2o + d2 - d1); children
// that land at sup-norm >= 4 are integrated directly, the rest stay unknown.
std::vector<double> solve_near_field(int n, double s) {
  const int side = 2 * kNear + 1;
  const int count = n == 1 ? side : side * side;
  std::vector<std::array<int, 2>> unknowns;
  std::vector<int> slot(count, -1);
  for (int dj = (n == 1 ? 0 : -kNear); dj <= (n == 1 ? 0 : kNear); ++dj)
    for (int di = -kNear; di <= kNear; ++di) {
      if (di == 0 && dj == 0) continue;
      slot[near_index(di, dj, n)] = static_cast<int>(unknowns.size());
      unknowns.push_back({di, dj});
    }
  const int m = static_cast<int>(unknowns.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  const double c = std::pow(2.0, -(n - 2 * s));
  std::map<std::pair<int, int>, double> far_cache;
  const int dmax = n == 1 ? 0 : 1;
  for (int row = 0; row < m; ++row) {
    const auto [oi, oj] = unknowns[row];
    for (int ax = 0; ax <= 1; ++ax)
      for (int bx = 0; bx <= 1; ++bx)
        for (int ay = 0; ay <= dmax; ++ay)
          for (int by = 0; by <= dmax; ++by) {
            const int ci = 2 * oi + bx - ax;
            const int cj = n == 1 ? 0 : 2 * oj + by - ay;
            if (std::max(std::abs(ci), std::abs(cj)) <= kNear) {
              A(row, slot[near_index(ci, cj, n)]) -= c;
            } else {
              auto key = std::make_pair(ci, cj);
              auto it = far_cache.find(key);
              if (it == far_cache.end())
                it = far_cache.emplace(key, overlap_integral(ci, cj, s, n)).first;
              b(row) += c * it->second;
            }
          }
  }
  const Eigen::VectorXd w = A.fullPivLu().solve(b);
  std::vector<double> out(count, 0.0);
  for (int row = 0; row < m; ++row) out[near_index(unknowns[row][0], unknowns[row][1], n)] = w(row);
  return out;
}

const std::vector<double>& near_field(int n, double s) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, solve_near_field(n, s)).first;
  return it->second;
}

}  // namespace

double pair_weight(int di, int dj, double h, double s, int n) {
  if (n != 1 && n != 2) fail(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  if (n == 1 && dj != 0) fail(ErrorCode::InvalidArgument, "1D offsets have no second component");
  if (di == 0 && dj == 0) fail(ErrorCode::ZeroOffset, "self-interaction is not defined");
  require_s(s, 0.0, 1.0, true, "s in (0,1)");
  const double p = n + 2 * s;
  // Canonical representative so that lattice-symmetric offsets agree bitwise.
  di = std::abs(di);
  dj = std::abs(dj);
  if (dj > di) std::swap(di, dj);
  const int sup = di;
  if (sup > kNear || s >= 0.5) {
    const double dist = h * std::sqrt(double(di) * di + double(dj) * dj);
    return std::pow(h, 2 * n) * std::pow(dist, -p);
  }
  return std::pow(h, n - 2 * s) * near_field(n, s)[near_index(di, dj, n)];
}

InteractionTable build_table(int n, double h, double s, double R_t, std::size_t cap) {
  require_s(s, 0.0, 1.0, true, "s in (0,1)");
  if (!(R_t >= 4 * h * (1 - 1e-12)))
    fail(ErrorCode::InvalidArgument, "truncation radius must be at least 4h");
  InteractionTable t;
  t.n = n;
  t.h = h;
  t.s = s;
  t.rt = R_t;
  t.M = static_cast<int>(std::floor(R_t / h + 1e-9));
  t.tau = tail(R_t, s, n);
  const int M = t.M, side = 2 * M + 1;
  const double est = n == 1 ? side : kPi * (M + 1.0) * (M + 1.0);
  if (est > static_cast<double>(cap))
    fail(ErrorCode::OutOfMemory, "interaction table exceeds the offset cap");
  const double r2 = (R_t / h) * (R_t / h) * (1 + 1e-12);
  (void)near_field(n, s < 0.5 ? s : 0.25);  // warm cache outside the workers
  const int rows = n == 1 ? 1 : side;
  t.dense.assign(static_cast<std::size_t>(rows) * side, 0.0);
  parallel_for(rows, [&](std::size_t r) {
    const int dj = n == 1 ? 0 : static_cast<int>(r) - M;
    for (int di = -M; di <= M; ++di) {
      if (di == 0 && dj == 0) continue;
      if (double(di) * di + double(dj) * dj > r2) continue;
      t.dense[r * side + (di + M)] = pair_weight(di, dj, h, s, n);
    }
  });
  for (int r = 0; r < rows; ++r)
    for (int di = -M; di <= M; ++di) {
      const double w = t.dense[static_cast<std::size_t>(r) * side + (di + M)];
      if (w > 0) t.offsets.push_back({di, n == 1 ? 0 : r - M, w});
    }
  return t;
}

namespace {
constexpr char kMagic[8] = {'F', 'R', 'C', 'L', 'T', 'B', 'L', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_table(const InteractionTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write table cache " + path);
  f.write(kMagic, sizeof kMagic);
  f.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  const std::int32_t n = t.n, M = t.M;
  f.write(reinterpret_cast<const char*>(&n), sizeof n);
  f.write(reinterpret_cast<const char*>(&t.h), sizeof t.h);
  f.write(reinterpret_cast<const char*>(&t.s), sizeof t.s);
  f.write(reinterpret_cast<const char*>(&t.rt), sizeof t.rt);
  f.write(reinterpret_cast<const char*>(&M), sizeof M);
  const std::uint64_t count = t.dense.size();
  f.write(reinterpret_cast<const char*>(&count), sizeof count);
  f.write(reinterpret_cast<const char*>(t.dense.data()), static_cast<std::streamsize>(count * sizeof(double)));
}

bool load_table(const std::string& path, int n, double h, double s, double R_t, InteractionTable& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  char magic[8];
  std::uint32_t version = 0;
  std::int32_t fn = 0, M = 0;
  double fh = 0, fs = 0, frt = 0;
  std::uint64_t count = 0;
  f.read(magic, sizeof magic);
  f.read(reinterpret_cast<char*>(&version), sizeof version);
  f.read(reinterpret_cast<char*>(&fn), sizeof fn);
  f.read(reinterpret_cast<char*>(&fh), sizeof fh);
  f.read(reinterpret_cast<char*>(&fs), sizeof fs);
  f.read(reinterpret_cast<char*>(&frt), sizeof frt);
  f.read(reinterpret_cast<char*>(&M), sizeof M);
  f.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!f || std::memcmp(magic, kMagic, sizeof kMagic) != 0 || version != kVersion) return false;
  if (fn != n || fh != h || fs != s || frt != R_t) return false;
  const std::size_t side = 2 * static_cast<std::size_t>(M) + 1;
  if (count != (n == 1 ? side : side * side)) return false;
  InteractionTable t;
  t.n = n;
  t.h = h;
  t.s = s;
  t.rt = R_t;
  t.M = M;
  t.tau = tail(R_t, s, n);
  t.dense.resize(count);
  f.read(reinterpret_cast<char*>(t.dense.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!f) return false;
  const int rows = n == 1 ? 1 : static_cast<int>(side);
  for (int r = 0; r < rows; ++r)
    for (int di = -M; di <= M; ++di) {
      const double w = t.dense[static_cast<std::size_t>(r) * side + (di + M)];
      if (w > 0) t.offsets.push_back({di, n == 1 ? 0 : r - M, w});
    }
  out = std::move(t);
  return true;
}

}  // namespace fraclab
