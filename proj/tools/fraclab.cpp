#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fraclab/common.hpp"
#include "fraclab/lab/commands.hpp"
#include "fraclab/lab/config.hpp"

namespace {

using nlohmann::json;

enum class Kind { Str, Num, Int, NumList, StrList };

struct Flag {
  const char* name;  // CLI spelling, also used for aliases below
  const char* key;   // config key
  Kind kind;
  const char* help;
};

const Flag kFlags[] = {
    {"--shape,--exterior,--trace", "shape", Kind::Str, "shape grammar, e.g. halfplane:ny=1,c=0"},
    {"--s", "s", Kind::Num, "fractional exponent"},
    {"--s-list", "s_list", Kind::NumList, "comma-separated s values"},
    {"--eps", "eps", Kind::Num, "phase-field scale"},
    {"--eps-list", "eps_list", Kind::NumList, "comma-separated eps values"},
    {"--h", "h", Kind::Num, "grid step"},
    {"--window", "window", Kind::Num, "half-width of the square window"},
    {"--rt", "rt", Kind::Num, "truncation radius (0: command default)"},
    {"--r", "r", Kind::Num, "radius of U = B_r (0: whole window)"},
    {"--x0", "x0", Kind::NumList, "point x,y"},
    {"--rho0", "rho0", Kind::Num, "inner cutoff radius"},
    {"--mode", "mode", Kind::Str, "to_half or to_zero"},
    {"--method", "method", Kind::Str, "maxflow or flip"},
    {"--iters", "iters", Kind::Int, "descent iteration budget"},
    {"--tol", "tol", Kind::Num, "relative energy decrease that stops descent"},
    {"--height", "height", Kind::Num, "top of the extension box"},
    {"--radii", "radii", Kind::NumList, "density radii"},
    {"--thetas", "thetas", Kind::NumList, "density thresholds theta1,theta2"},
    {"--seed", "seed", Kind::Int, "random seed"},
    {"--only", "only", Kind::StrList, "criterion ids for repro"},
    {"--out", "out", Kind::Str, "main output file"},
    {"--report", "report", Kind::Str, "secondary report file"},
    {"--json", "json", Kind::Str, "JSON summary file"},
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double number(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw fraclab::Error(fraclab::ErrorCode::InvalidArgument, flag + " expects a number, got '" + text + "'");
  return v;
}

json convert(const Flag& f, const std::string& text) {
  switch (f.kind) {
    case Kind::Str: return text;
    case Kind::Num: return number(f.key, text);
    case Kind::Int: {
      const double v = number(f.key, text);
      if (v != std::floor(v) || v < 0)
        throw fraclab::Error(fraclab::ErrorCode::InvalidArgument, std::string(f.key) + " expects a non-negative integer");
      return static_cast<std::uint64_t>(v);
    }
    case Kind::NumList: {
      json arr = json::array();
      for (const auto& part : split(text)) arr.push_back(number(f.key, part));
      return arr;
    }
    case Kind::StrList: return split(text);
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclab: fractional perimeter and phase-field laboratory"};
  app.require_subcommand(1);
  const char* commands[][2] = {
      {"perimeter", "discrete s-perimeter of a rasterized shape"},
      {"sweep-s", "scaled perimeter along an s sweep with extrapolated limit"},
      {"el", "Euler-Lagrange integral at a boundary point"},
      {"minimize", "exact or local discrete minimizer with a prescribed exterior"},
      {"allen-cahn", "projected-gradient minimizer of the rescaled phase-field energy"},
      {"gamma-sweep", "interface deviation of phase-field minimizers over eps"},
      {"extend", "extension of a +-1 trace into the upper half-space"},
      {"cone-demo", "cross cone versus cross cone plus square"},
      {"repro", "acceptance suite"},
  };
  std::map<std::string, std::string> values;
  std::string config_path;
  std::vector<std::pair<CLI::App*, std::vector<std::pair<const Flag*, CLI::Option*>>>> subs;
  for (auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    std::vector<std::pair<const Flag*, CLI::Option*>> opts;
    for (const Flag& f : kFlags) opts.push_back({&f, sub->add_option(f.name, values[f.key], f.help)});
    subs.push_back({sub, opts});
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  fraclab::lab::ExperimentConfig cfg;
  try {
    for (auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      cfg.experiment = sub->get_name();
      if (!config_path.empty()) fraclab::lab::load_config_file(cfg, config_path);
      cfg.experiment = sub->get_name();
      json flags = json::object();
      for (auto& [flag, opt] : opts)
        if (opt->count() > 0) flags[flag->key] = convert(*flag, values[flag->key]);
      fraclab::lab::apply_json(cfg, flags);
    }
  } catch (const fraclab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return fraclab::lab::run(cfg, std::cout, std::cerr);
}
