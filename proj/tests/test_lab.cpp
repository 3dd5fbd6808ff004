#include <sstream>

#include "doctest.h"
#include "fraclab/common.hpp"
#include "fraclab/lab/acceptance.hpp"
#include "fraclab/lab/commands.hpp"
#include "fraclab/lab/config.hpp"

using namespace fraclab;
using namespace fraclab::lab;
using nlohmann::json;

TEST_CASE("config parsing") {
  ExperimentConfig c;
  apply_json(c, json::parse(R"({"shape": "crosscone", "s": 0.3, "s_list": [0.1, 0.2]})"));
  CHECK(c.shape == "crosscone");
  CHECK(c.s == 0.3);
  CHECK(c.s_list == std::vector<double>{0.1, 0.2});
  CHECK(c.h == 0.0625);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"sigma": 0.3})")), Error);
  CHECK_THROWS_AS(apply_json(c, json::parse(R"({"s": "x"})")), Error);
  CHECK_THROWS_AS(apply_json(c, json::parse("[1, 2]")), Error);

  // Later layers win: file values first, then command-line values.
  apply_json(c, json::parse(R"({"s": 0.15})"));
  CHECK(c.s == 0.15);
  CHECK(c.shape == "crosscone");
}

TEST_CASE("config hash") {
  ExperimentConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.out = "elsewhere.csv";
  CHECK(config_hash(a) == config_hash(b));
  b.s = 0.26;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c));
  c.mode = "sideways";
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.s = 1.2;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.eps_list = {0.1, 1.5};
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("command dispatch and exit codes") {
  ExperimentConfig c;
  c.experiment = "perimeter";
  c.shape = "crosscone";
  c.h = 0.125;
  c.rt = 1.5;
  std::ostringstream out, err;
  CHECK(run(c, out, err) == 0);
  CHECK(out.str().rfind("s,", 0) == 0);
  CHECK(out.str().find("# config_hash=" + config_hash(c)) != std::string::npos);

  c.experiment = "sweep-s";
  c.s_list = {0.7};
  std::ostringstream out2, err2;
  CHECK(run(c, out2, err2) == 2);
  CHECK(err2.str().find("s ∈ (0,1/2)") != std::string::npos);

  c.experiment = "nonsense";
  std::ostringstream out3, err3;
  CHECK(run(c, out3, err3) == 2);
}

TEST_CASE("acceptance registry") {
  const auto ids = criterion_ids();
  REQUIRE(ids.size() == 16);
  CHECK(ids.front() == "A1");
  CHECK(ids.back() == "A16");
  std::ostringstream log;
  CHECK_THROWS_AS(run_acceptance({"A99"}, log), Error);
  const auto r = run_acceptance({"A10"}, log);
  REQUIRE(r.size() == 1);
  CHECK(r[0].pass);
  CHECK(log.str().rfind("PASS A10", 0) == 0);
  const json j = summary_json(r);
  CHECK(j["schema"] == 1);
  CHECK(j["all_blocking_pass"] == true);
}
