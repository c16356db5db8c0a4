#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "harnack/reports.hpp"

using namespace harnack;
using Catch::Matchers::WithinAbs;

namespace {

RunConfig config(std::string model, double C) {
  RunConfig c;
  c.model = std::move(model);
  c.C = C;
  c.grid_size = 128;
  c.probes = 4;
  return c;
}

}  // namespace

TEST_CASE("config round trip", "[cli]") {
  RunConfig c;
  c.model = "smoothed-cone:0.5:1";
  c.n = 5;
  c.C = 12.5;
  c.D = 3.0;
  c.lambdas = {0.0, 0.1, 1.0};
  c.seed = 42;
  c.output_dir = "out";
  const json j = c;
  const auto back = j.get<RunConfig>();
  CHECK(json(back) == j);
  CHECK(back.D == 3.0);

  const auto defaults = json::object().get<RunConfig>();
  CHECK(defaults.model == "euclidean");
  CHECK(defaults.n == 4);
  CHECK(defaults.C == 10);
  CHECK(defaults.grid_size == 512);
  CHECK_FALSE(defaults.D);

  CHECK_THROWS_AS(json::parse(R"({"modle": "euclidean"})").get<RunConfig>(), InvalidInput);
  CHECK_THROWS_AS(json::parse(R"({"n": "four"})").get<RunConfig>(), InvalidInput);
  CHECK_THROWS_AS(json::array().get<RunConfig>(), InvalidInput);
}

TEST_CASE("config files", "[cli]") {
  const std::string path = "test_cli_config.json";
  std::ofstream(path) << R"({"model": "cone:0.5", "C": 0.3, "exploratory": true, "grid_size": 64, "probes": 3})";
  const auto c = load_config(path);
  CHECK(c.model == "cone:0.5");
  CHECK(c.C == 0.3);
  CHECK(run_command("verify", c).exit_code == exit_exploratory);
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_config(path), InvalidInput);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidInput);
  std::remove(path.c_str());
}

TEST_CASE("validation", "[cli][errors]") {
  auto c = config("euclidean", 10);
  c.n = 2;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = config("euclidean", 10);
  c.r_max = c.r_min;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = config("euclidean", 10);
  c.lambdas = {0.5, 1.2};
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = config("euclidean", 10);
  c.h = 0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  CHECK_THROWS_AS(run_command("frobnicate", config("euclidean", 10)), InvalidInput);
  CHECK_THROWS_AS(run_command("symbolic verify", config("euclidean", 10)), InvalidInput);
}

TEST_CASE("verify exit codes and report", "[cli]") {
  const auto e = run_command("verify", config("euclidean", 10));
  CHECK(e.exit_code == exit_pass);
  CHECK(e.report["verdict"] == "pass");
  CHECK(e.report["command"] == "verify");
  CHECK_THAT(e.report["result"]["worst_margin"].get<double>(), WithinAbs(8.0, 1e-12));
  CHECK(e.report["hypothesis_flags"]["all_hold"] == true);
  CHECK(e.report["result"]["violations"].empty());
  CHECK(e.artifacts.count("eigenvalues.csv") == 1);
  CHECK(e.report.dump().find("time") == std::string::npos);

  const auto c = run_command("verify", config("cone:0.5", 10));
  CHECK(c.exit_code == exit_exploratory);
  CHECK(c.report["hypothesis_flags"]["parallel_ricci"] == false);
  CHECK(c.report["result"]["pass"] == true);

  CHECK_THROWS_AS(run_command("verify", config("euclidean", 5)), InvalidInput);
  auto low = config("euclidean", 1);
  low.exploratory = true;
  const auto l = run_command("verify", low);
  CHECK(l.exit_code == exit_fail);
  CHECK_FALSE(l.report["result"]["violations"].empty());
}

TEST_CASE("other commands", "[cli]") {
  auto m = config("cone:0.8", 10);
  m.n = 3;
  const auto mc = run_command("min-c", m);
  CHECK_THAT(mc.report["result"]["minimal_C"].get<double>(), WithinAbs(0.8192, 1e-6));

  const auto s = run_command("symbolic verify-all", config("euclidean", 10));
  CHECK(s.exit_code == exit_pass);
  CHECK(run_command("symbolic verify", config("euclidean", 10), "misc.2").exit_code == exit_pass);
  CHECK_THROWS_AS(run_command("symbolic verify", config("euclidean", 10), "no.such"), InvalidInput);

  auto o = config("euclidean", 10);
  o.chart = "s2xr2";
  CHECK(run_command("oracle commutators", o).exit_code == exit_pass);

  const auto a = run_command("audit", config("euclidean", 10));
  CHECK(a.exit_code == exit_pass);
  CHECK(run_command("audit", config("cone:0.5", 10)).exit_code == exit_exploratory);

  auto cor = config("euclidean", 2);
  cor.exploratory = true;
  cor.triples = 3;
  const auto k = run_command("corollary", cor);
  CHECK(k.exit_code == exit_exploratory);
  CHECK(k.artifacts.count("corollary.csv") == 1);

  const auto p = run_command("export-profile", config("euclidean", 10));
  CHECK(p.artifacts.at("profile.csv").rfind("r,G,Gp,Gpp,b,b2,grad_b,mu_rad,mu_tan\n", 0) == 0);
  CHECK(run_command("models list", config("euclidean", 10)).report["result"]["models"].size() == 4);
}

TEST_CASE("identical configs give identical reports", "[cli][property]") {
  auto cor = config("cone:0.5", 0.25);
  cor.exploratory = true;
  cor.triples = 4;
  cor.seed = 99;
  for (const char* cmd : {"verify", "corollary", "audit", "min-c"}) {
    const auto a = run_command(cmd, cor), b = run_command(cmd, cor);
    CHECK(dump_report(a.report) == dump_report(b.report));
    CHECK(a.artifacts == b.artifacts);
  }
  auto other = cor;
  other.seed = 100;
  CHECK(dump_report(run_command("corollary", cor).report) != dump_report(run_command("corollary", other).report));
}
