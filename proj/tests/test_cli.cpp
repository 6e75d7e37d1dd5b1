#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hypermetric/cli.hpp"

using namespace hypermetric;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) {
  return (std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/hypermetric_" +
          name);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("metric command") {
  const Run r = invoke({"metric", "--domain", "disk:0,1", "--point", "0.5", "--vector", "1",
                        "--metric", "caratheodory"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["value"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(j["kind"] == "exact");
  CHECK(j["command"] == "metric");
  CHECK(j["config"]["domain"]["kind"] == "disk");
  CHECK(j["config"]["point"] == Json::parse("[[0.5,0.0]]"));
}

TEST_CASE("contraction command") {
  const Run r = invoke({"contraction", "--X", "disk:0,1", "--U", "disk:0,0.5", "--method", "dilation"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["k"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(j["rigorous"] == true);
  CHECK(j["method"] == "dilation");
}

TEST_CASE("fixpoint command with trace") {
  const std::string trace = temp_path("trace.csv");
  const Run r = invoke({"fixpoint", "--X", "disk:0,1", "--U", "disk:0,0.6", "--map", "(z1^2+1)/4",
                        "--x0", "0", "--trace", trace});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["c"][0][0].get<double>() == doctest::Approx(0.2679491924311228).epsilon(1e-9));
  CHECK(j["residual"].get<double>() <= 1e-10);
  CHECK(j["stopping_rule"] == "euclidean_surrogate");
  CHECK(j["range_evidence"]["verdict"] == "supported");
  const std::string csv = slurp(trace);
  std::istringstream lines(csv);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "iter,re_z1,im_z1,step_euclid,certified_tail");
  CHECK(first.rfind("0,0,0,0.25,", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == j["iterations"].get<int>());
  std::remove(trace.c_str());
}

TEST_CASE("distance, diameter and verify commands") {
  const Run d = invoke({"distance", "--domain", "disk:0,1", "--a", "0", "--b", "0.5"});
  REQUIRE(d.code == 0);
  CHECK(d.json()["value"].get<double>() == doctest::Approx(0.5493061443340548));
  const Run di = invoke({"distance", "--domain", "disk:0,1", "--a", "0", "--b", "0.5",
                         "--metric", "kobayashi", "--integrated"});
  REQUIRE(di.code == 0);
  CHECK(di.json()["value"].get<double>() == doctest::Approx(0.5493061443340548).epsilon(1e-4));
  CHECK(di.json()["integrated"] == true);

  const Run m = invoke({"diameter", "--X", "disk:0,1", "--U", "disk:0,0.5"});
  REQUIRE(m.code == 0);
  CHECK(m.json()["value"].get<double>() == doctest::Approx(1.0986122886681098));
  CHECK(m.json()["k"].get<double>() == doctest::Approx(0.8));

  const Run v = invoke({"verify", "--X", "disk:0,1", "--U", "disk:0,0.5", "--k", "0.4",
                        "--samples", "16"});
  REQUIRE(v.code == 0);
  CHECK(v.json()["report"]["verdict"] == "violated");
  CHECK(v.json()["report"]["samples"] == 16);
}

TEST_CASE("identical invocations give byte-identical output") {
  const std::vector<std::string> args = {"verify", "--X", "polydisc:0,1/0,1", "--U",
                                         "polydisc:0,0.5/0.1i,0.4", "--seed", "3"};
  CHECK(invoke(args).out == invoke(args).out);
  const std::vector<std::string> fp = {"fixpoint", "--X", "disk:0,1", "--U", "disk:0,0.6",
                                       "--map", "z1/2", "--x0", "0.9"};
  CHECK(invoke(fp).out == invoke(fp).out);
}

TEST_CASE("config files and flag overrides") {
  const std::string cfg = R"({"X":"disk:0,1","U":"disk:0,0.6","map":"z1/2","x0":[[0.9,0]],
                               "tol":1e-6,"path":{"segments":4}})";
  const Run r = invoke({"fixpoint", "--config", "-", "--tol", "1e-12"}, cfg);
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["config"]["tol"].get<double>() == 1e-12);
  CHECK(j["config"]["path"]["segments"] == 4);
  CHECK(j["config"]["path"]["refinements"] == 5);
  CHECK(j["residual"].get<double>() <= 1e-12);

  const std::string out = temp_path("out.json");
  const Run o = invoke({"contraction", "--X", "disk:0,1", "--U", "disk:0,0.5", "--out", out});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  CHECK(Json::parse(slurp(out))["k"].get<double>() == doctest::Approx(2.0 / 3.0));
  std::remove(out.c_str());
}

TEST_CASE("the resolved config exposes every default") {
  const Json defaults = cli::default_config();
  for (const char* key : {"seed", "samples", "tol", "max_iter", "range_floor"}) {
    CHECK(defaults.contains(key));
  }
  CHECK(defaults["max_iter"] == 10000);
  CHECK(defaults["tol"].get<double>() == 1e-10);
  CHECK(defaults["kobayashi"]["radius_tol"].get<double>() == 1e-6);
  CHECK(defaults["quadrature"]["max_refinements"] == 10);
  Json base = defaults;
  CHECK_THROWS_AS(cli::overlay(base, Json::parse(R"({"bogus":1})")), ConfigError);
  CHECK_THROWS_AS(cli::overlay(base, Json::parse(R"({"path":{"bogus":1}})")), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"metric", "--point", "0.5", "--vector", "1"}).code == 1);
  CHECK(invoke({"metric", "--domain", "disk:0,1", "--point", "0.5", "--vector", "1",
                "--metric", "taxicab"}).code == 1);
  CHECK(invoke({"fixpoint", "--X", "disk:0,1", "--U", "disk:0,0.6", "--map", "z1 + ", "--x0", "0"})
            .code == 1);
  CHECK(invoke({"fixpoint", "--config", "/nonexistent/cfg.json"}).code == 1);
  CHECK(invoke({"metric", "--domain", "disk:0,1", "--point", "2", "--vector", "1"}).code == 2);
  const Run refuted = invoke({"fixpoint", "--X", "disk:0,1", "--U", "disk:0,0.5", "--map", "z1",
                              "--x0", "0"});
  CHECK(refuted.code == 2);
  CHECK(refuted.err.find("refuted") != std::string::npos);
  CHECK(invoke({"contraction", "--X", "disk:0,1", "--U", "disk:0,1"}).code == 2);

  const std::string trace = temp_path("fail.csv");
  const Run slow = invoke({"fixpoint", "--X", "disk:0,1", "--U", "disk:0,0.6", "--map", "z1/2",
                           "--x0", "0.9", "--max-iter", "3", "--trace", trace});
  CHECK(slow.code == 3);
  CHECK(slow.out.empty());
  CHECK(std::count(slow.err.begin(), slow.err.end(), '\n') >= 1);
  const std::string csv = slurp(trace);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  std::remove(trace.c_str());

  CHECK(invoke({"--help"}).code == 0);
}
