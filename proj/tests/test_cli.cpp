#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zoll/cli.hpp"

using namespace zoll;
using namespace zoll::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zoll_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "zoll");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p;
}

const json gauss_profile = {{"kind", "gaussian_mixture"}, {"terms", {{{"c", 1.0}, {"k", 1.0}}}}};

}  // namespace

TEST_CASE("ranges include both ends") {
  const auto v = Range{-1, 1, 5}.values();
  CHECK(v == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(Range{0, 0.3, 4}.values().back() == 0.3);
}

TEST_CASE("config validation") {
  const ExperimentConfig d = ExperimentConfig::from_json(json::object());
  CHECK(d.radial().is_zero());
  CHECK(d.odd().is_zero());
  CHECK(d.format == Format::Csv);

  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"grids", {{"s", {{"min", 0}, {"max", 1}, {"count", 1}}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"grids", {{"s", {{"min", 1}, {"max", 0}, {"count", 3}}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"grids", {{"s", {{"min", 0}, {"count", 3}}}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"quadrature", {{"panels", 7}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"quadrature", {{"panel", 32}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"format", "xml"}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"profile", {{"kind", "sinc"}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"profile", {{"kind", "gaussian_mixture"}}}}), ConfigError);

  const ExperimentConfig odd =
      ExperimentConfig::from_json({{"profile", {{"kind", "odd_hermite"}, {"terms", {{{"c", 1}, {"k", 1}}}}}}});
  CHECK(odd.profile_is_odd());
  CHECK_THROWS_AS(odd.radial(), ConfigError);
  CHECK_THROWS_AS(run_subcommand("radon", odd, {}), ConfigError);
  CHECK_THROWS_AS(run_subcommand("nope", odd, {}), ConfigError);

  const ExperimentConfig g = ExperimentConfig::from_json({{"profile", gauss_profile}, {"params", {{"c1", 0.5}}}});
  CHECK_THROWS_AS(g.odd(), ConfigError);
  CHECK(g.param("c1", 1.0) == 0.5);
  CHECK(g.param("c2", 1.0) == 1.0);
  CHECK_THROWS_AS(g.param("c1", std::string("x")), ConfigError);
  // the echo parses back to the same config
  CHECK(ExperimentConfig::from_json(g.to_json()).to_json() == g.to_json());
}

TEST_CASE("check relations and tolerance overrides") {
  CHECK(Check{"a", 1, 2, "<"}.pass());
  CHECK_FALSE(Check{"a", 2, 2, "<"}.pass());
  CHECK(Check{"a", 2, 2, "<="}.pass());
  CHECK(Check{"a", 3, 2, ">"}.pass());
  CHECK(Check{"a", 0, 0, "=="}.pass());
  CHECK_FALSE(Check{"a", std::nan(""), 1, "<"}.pass());
  CHECK(Check{"a", 0.5, 1, "<"}.line() == "PASS a 0.5 < 1");

  ExperimentConfig cfg = ExperimentConfig::from_json(
      {{"profile", gauss_profile}, {"grids", {{"mu", {{"min", 0}, {"max", 2}, {"count", 3}}}}}});
  const Report r = run_subcommand("radon", cfg, {});
  REQUIRE(r.checks.size() == 2);
  CHECK(r.passed());
  CHECK(r.checks[0].bound == 1e-8);
  cfg.tolerances["closed_form"] = 1e-30;
  const Report strict = run_subcommand("radon", cfg, {});
  CHECK(strict.checks[0].pass());
  CHECK_FALSE(strict.checks[1].pass());
  CHECK_FALSE(strict.passed());
  // --tol replaces every upper bound, including config entries
  const Report loose = run_subcommand("radon", cfg, Options{1e-3, 1});
  CHECK(loose.checks[1].bound == 1e-3);
  CHECK(loose.passed());
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  const std::string out = (dir / "out").string();
  const json small = {{"profile", gauss_profile}, {"grids", {{"mu", {{"min", 0}, {"max", 2}, {"count", 3}}}}}};
  const std::string cfg = write_config(dir, small).string();
  CHECK(run_args({"radon", "--config", cfg, "--out", out}) == 0);
  CHECK(fs::exists(dir / "out" / "radon.json"));
  CHECK(fs::exists(dir / "out" / "radon.csv"));
  CHECK(fs::exists(dir / "out" / "radon.txt"));
  CHECK(run_args({"radon", "--config", cfg, "--out", out, "--tol", "1e-30"}) == 1);
  CHECK(run_args({"radon", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(run_args({"radon"}) == 2);
  CHECK(run_args({"spin", "--config", cfg}) == 2);
  CHECK(run_args({"radon", "--config", cfg, "--tol", "-1"}) == 2);
  CHECK(run_args({"radon", "--config", cfg, "--threads", "0"}) == 2);
  std::ofstream(dir / "broken.json") << "{\"profile\": ";
  CHECK(run_args({"radon", "--config", (dir / "broken.json").string()}) == 2);
  // a curve family with A = 0 is refused as a config error
  json zero_a = small;
  zero_a["grids"] = {{"A", {{"min", 0}, {"max", 1}, {"count", 2}}}};
  zero_a["profile"] = {{"kind", "zero"}};
  CHECK(run_args({"jump", "--config", write_config(dir, zero_a).string(), "--out", out}) == 2);
  json few = small;
  few["params"] = {{"samples", 1}};
  CHECK(run_args({"geodesic", "--config", write_config(dir, few).string(), "--out", out}) == 2);
  // a quadrature that cannot converge is an internal error
  json starved = small;
  starved["quadrature"] = {{"tolerance", 1e-300}, {"max_subdivisions", 1}};
  CHECK(run_args({"invert", "--config", write_config(dir, starved).string(), "--out", out}) == 3);
}

TEST_CASE("reports are byte-identical across reruns and thread counts") {
  const fs::path dir = scratch("det");
  const json j = {{"profile", gauss_profile},
                  {"grids", {{"s", {{"min", -2}, {"max", 2}, {"count", 5}}}, {"A", {{"min", 0.5}, {"max", 1}, {"count", 2}}}}}};
  const std::string cfg = write_config(dir, j).string();
  for (const std::string sub : {"jump", "foliate"}) {
    REQUIRE(run_args({sub, "--config", cfg, "--out", (dir / "a").string(), "--threads", "1"}) == 0);
    REQUIRE(run_args({sub, "--config", cfg, "--out", (dir / "b").string(), "--threads", "3"}) == 0);
    for (const auto& e : fs::directory_iterator(dir / "a"))
      CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
  }
  // a different seed moves the random samples
  REQUIRE(run_args({"foliate", "--config", cfg, "--out", (dir / "c").string(), "--seed", "9"}) == 0);
  CHECK(slurp(dir / "a" / "foliate.csv") != slurp(dir / "c" / "foliate.csv"));
}

TEST_CASE("json format embeds the tables") {
  const fs::path dir = scratch("fmt");
  const json j = {{"profile", {{"kind", "zero"}}},
                  {"format", "json"},
                  {"grids", {{"s", {{"min", -1}, {"max", 1}, {"count", 3}}}, {"A", {{"min", 1}, {"max", 2}, {"count", 2}}}}}};
  REQUIRE(run_args({"jump", "--config", write_config(dir, j).string(), "--out", (dir / "o").string()}) == 0);
  CHECK_FALSE(fs::exists(dir / "o" / "jump.csv"));
  const json rep = json::parse(slurp(dir / "o" / "jump.json"));
  CHECK(rep["passed"] == true);
  CHECK(rep["tables"]["jump"]["rows"].size() == 6);
  CHECK(rep["tables"]["jump"]["columns"][0] == "s");
  CHECK(rep["data"]["samples"].size() == 6);
  for (const auto& s : rep["data"]["samples"]) CHECK(s["jump"] == 0.0);
  CHECK_FALSE(rep["config"].contains("output"));
  const std::string summary = slurp(dir / "o" / "jump.txt");
  CHECK(summary.rfind("jump: pass\n", 0) == 0);
  CHECK(summary.find("PASS im_gap") != std::string::npos);
}

TEST_CASE("every subcommand runs on the flat profile") {
  const ExperimentConfig cfg = ExperimentConfig::from_json(
      {{"profile", {{"kind", "zero"}}},
       {"params", {{"triples", 2}, {"points", 2}, {"samples", 8}}},
       {"grids",
        {{"mu", {{"min", -1}, {"max", 1}, {"count", 3}}},
         {"c1", {{"min", -1}, {"max", 1}, {"count", 2}}},
         {"q1", {{"min", -1}, {"max", 1}, {"count", 2}}},
         {"x1", {{"min", -1}, {"max", 1}, {"count", 2}}},
         {"x2", {{"min", -1}, {"max", 1}, {"count", 2}}},
         {"s", {{"min", -1}, {"max", 1}, {"count", 3}}},
         {"A", {{"min", 1}, {"max", 2}, {"count", 2}}}}}});
  for (const auto& sub : subcommands()) {
    const Report r = run_subcommand(sub, cfg, {});
    INFO(r.summary());
    CHECK(r.passed());
    CHECK_FALSE(r.checks.empty());
  }
}
