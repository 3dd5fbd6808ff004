#include "fraclab/lab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "fraclab/common.hpp"

namespace fraclab::lab {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment", "shape",  "s",      "s_list", "eps",    "eps_list", "h",    "window",
      "rt",         "r",      "x0",     "rho0",   "mode",   "method",   "iters", "tol",
      "height",     "radii",  "thetas", "seed",   "only",   "out",      "report", "json"};
  return keys;
}

namespace {

template <class T>
void take(const json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidArgument, std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void apply_json(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  const auto& keys = config_keys();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      fail(ErrorCode::InvalidArgument, "unknown config key '" + it.key() + "'");
  take(j, "experiment", c.experiment);
  take(j, "shape", c.shape);
  take(j, "s", c.s);
  take(j, "s_list", c.s_list);
  take(j, "eps", c.eps);
  take(j, "eps_list", c.eps_list);
  take(j, "h", c.h);
  take(j, "window", c.window);
  take(j, "rt", c.rt);
  take(j, "r", c.r);
  take(j, "x0", c.x0);
  take(j, "rho0", c.rho0);
  take(j, "mode", c.mode);
  take(j, "method", c.method);
  take(j, "iters", c.iters);
  take(j, "tol", c.tol);
  take(j, "height", c.height);
  take(j, "radii", c.radii);
  take(j, "thetas", c.thetas);
  take(j, "seed", c.seed);
  take(j, "only", c.only);
  take(j, "out", c.out);
  take(j, "report", c.report);
  take(j, "json", c.json);
}

void load_config_file(ExperimentConfig& c, const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot read config file " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config file is not valid JSON: ") + e.what());
  }
  apply_json(c, j);
}

json to_json(const ExperimentConfig& c) {
  return json{{"experiment", c.experiment}, {"shape", c.shape},   {"s", c.s},
              {"s_list", c.s_list},         {"eps", c.eps},       {"eps_list", c.eps_list},
              {"h", c.h},                   {"window", c.window}, {"rt", c.rt},
              {"r", c.r},                   {"x0", c.x0},         {"rho0", c.rho0},
              {"mode", c.mode},             {"method", c.method}, {"iters", c.iters},
              {"tol", c.tol},               {"height", c.height}, {"radii", c.radii},
              {"thetas", c.thetas},         {"seed", c.seed},     {"only", c.only}};
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();  // keys are sorted
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void validate(const ExperimentConfig& c) {
  require_s(c.s, 0.0, 1.0, true, "s ∈ (0,1)");
  for (double s : c.s_list) require_s(s, 0.0, 1.0, true, "s ∈ (0,1)");
  for (double e : c.eps_list)
    if (!(e > 0 && e < 1)) fail(ErrorCode::EpsOutOfRange, "eps must satisfy eps ∈ (0,1)");
  if (!(c.h > 0)) fail(ErrorCode::InvalidArgument, "h must be positive");
  if (!(c.window > 0)) fail(ErrorCode::InvalidArgument, "window half-width must be positive");
  if (c.rt < 0 || c.r < 0) fail(ErrorCode::InvalidArgument, "radii must be non-negative");
  if (c.x0.size() != 2) fail(ErrorCode::InvalidArgument, "x0 needs two coordinates");
  if (c.thetas.size() != 2) fail(ErrorCode::InvalidArgument, "thetas needs two values");
  if (c.iters < 0) fail(ErrorCode::InvalidArgument, "iters must be non-negative");
  if (c.mode != "to_half" && c.mode != "to_zero")
    fail(ErrorCode::InvalidArgument, "mode must be to_half or to_zero");
  if (c.method != "maxflow" && c.method != "flip")
    fail(ErrorCode::InvalidArgument, "method must be maxflow or flip");
}

}  // namespace fraclab::lab
