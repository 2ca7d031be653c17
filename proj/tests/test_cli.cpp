#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nodedens::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "nodedens");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nodedens_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("estimate from local powers") {
  const auto path = write_file("local.txt", "1\n0.25\n");
  const auto r = call({"estimate", path, "--mode", "local", "--gamma", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ide-ml"].get<double>() == doctest::Approx(0.159155).epsilon(1e-6));
  CHECK(j["ide"].get<double>() == doctest::Approx(0.079577).epsilon(1e-6));
  CHECK(j["ide-wrong"].get<double>() == doctest::Approx(0.190986).epsilon(1e-6));
  CHECK_FALSE(j.contains("cde"));
}

TEST_CASE("estimate from cooperative powers") {
  const auto path = write_file("coop.txt", "0.25\n\n1\n");
  const auto r = call({"estimate", path, "--mode", "cooperative", "--rank", "1", "--gamma", "2"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["cde"].get<double>() == doctest::Approx(0.063662).epsilon(1e-6));
}

TEST_CASE("estimate input errors") {
  const auto unsorted = write_file("unsorted.txt", "0.5\n0.1\n0.3\n");
  auto r = call({"estimate", unsorted, "--mode", "local"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  const auto garbage = write_file("garbage.txt", "0.5\nabc\n");
  r = call({"estimate", garbage, "--mode", "local"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  const auto empty = write_file("empty.txt", "\n");
  CHECK(call({"estimate", empty, "--mode", "local"}).code == 2);
  CHECK(call({"estimate", unsorted, "--mode", "cooperative"}).code == 1);
  CHECK(call({"estimate", unsorted, "--mode", "sideways"}).code == 1);
  CHECK(call({"estimate", scratch("missing.txt").string(), "--mode", "local"}).code == 2);

  const auto single = write_file("single.txt", "0.01\n");
  r = call({"estimate", single, "--mode", "local"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("sweep output shape") {
  auto r = call({"sweep-density", "--trials", "20"});
  REQUIRE(r.code == 0);
  auto l = lines(r.out);
  CHECK(l.front() == "sweep_param,estimator,lambda_true,mape_percent,rmse,mean_estimate,trials_used,degenerate_trials,"
                     "mean_sample_size");
  CHECK(l.size() == 41);

  r = call({"sweep-range", "--trials", "20"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 21);

  r = call({"sweep-density", "--trials", "20", "--estimators", "ide-wrong,ide"});
  REQUIRE(r.code == 0);
  l = lines(r.out);
  CHECK(l.size() == 21);
  CHECK(l[1].find(",ide,") != std::string::npos);
  CHECK(l[2].find(",ide-wrong,") != std::string::npos);

  r = call({"sweep-range", "--trials", "5", "--grid", "20:20:60", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).size() == 12);
}

TEST_CASE("sweeps are byte-identical for a seed") {
  const auto a = call({"sweep-density", "--trials", "50", "--seed", "42"});
  const auto b = call({"sweep-density", "--trials", "50", "--seed", "42", "--threads", "4"});
  const auto c = call({"sweep-density", "--trials", "50", "--seed", "43"});
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("sweep usage errors") {
  CHECK(call({"sweep-density", "--trials", "0"}).code == 1);
  CHECK(call({"sweep-density", "--estimators", "magic"}).code == 1);
  CHECK(call({"sweep-density", "--grid", "0.02,0.01"}).code == 1);
  CHECK(call({"sweep-range", "--conditioning", "SOMETIMES"}).code == 1);
  CHECK(call({"sweep-density", "--range", "-3"}).code == 1);
  CHECK(call({"sweep-density", "--config", scratch("nope.json").string()}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({}).code == 1);
}

TEST_CASE("run manifest reproduces the sweep") {
  const auto prefix = (scratch("runs") / "nested" / "run").string();
  REQUIRE(call({"sweep-range", "--trials", "40", "--seed", "5", "--grid", "20,60", "--out", prefix}).code == 0);
  const auto csv = slurp(prefix + ".csv");
  const auto manifest = nlohmann::json::parse(slurp(prefix + ".manifest.json"));
  CHECK(manifest["config"]["base_seed"] == 5);
  CHECK(manifest["config"]["trials"] == 40);
  CHECK(nlohmann::json::parse(slurp(prefix + ".json")).size() == 8);

  const auto again = call({"sweep-range", "--config", prefix + ".manifest.json"});
  REQUIRE(again.code == 0);
  CHECK(again.out == csv);
}

TEST_CASE("sampling commands") {
  auto r = call({"sample", "joint-dos", "--k", "4", "--lambda", "0.01", "-n", "30", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l.size() == 30);
  for (const auto& line : l) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(v[0] > 0.0);
  }
  CHECK(call({"sample", "joint-dos", "--k", "4", "--lambda", "0.01", "-n", "30", "--seed", "3"}).out == r.out);

  r = call({"sample", "uniform-ball", "--points", "5", "--range", "2", "-n", "3"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 3);

  CHECK(call({"sample", "kth-nearest", "--k", "2", "-n", "3"}).code == 1);
  CHECK(call({"sample", "unicorn", "-n", "3"}).code == 1);
}

TEST_CASE("sample output passes the KS check") {
  const auto r = call({"sample", "kth-nearest", "--k", "3", "--lambda", "0.01", "-n", "2000", "--seed", "8"});
  REQUIRE(r.code == 0);
  const auto path = write_file("ks.txt", r.out);
  auto ks = call({"validate", "ks", "--dist", "kth-nearest", "--k", "3", "--lambda", "0.01", "--input", path});
  CHECK(ks.code == 0);
  CHECK(ks.out.rfind("PASS", 0) == 0);
  // Wrong reference rank.
  ks = call({"validate", "ks", "--dist", "kth-nearest", "--k", "4", "--lambda", "0.01", "--input", path});
  CHECK(ks.code == 3);

  const auto joint = call({"sample", "joint-dos", "--k", "3", "--lambda", "0.01", "-n", "2000", "--seed", "8"});
  const auto jpath = write_file("joint.txt", joint.out);
  ks = call({"validate", "ks", "--dist", "kth-nearest", "--k", "2", "--lambda", "0.01", "--input", jpath,
             "--column", "2"});
  CHECK(ks.code == 0);
}

TEST_CASE("validate suite names") {
  CHECK(call({"validate", "nonsense"}).code == 1);
  CHECK(call({"validate"}).code == 1);
  CHECK_THROWS_AS(nodedens::cli::run_suite("nonsense", 1), std::invalid_argument);
}

TEST_CASE("power line parser") {
  std::istringstream in("1e-3\n  \n2.5e-4 \n");
  const auto v = nodedens::cli::parse_power_lines(in);
  REQUIRE(v.size() == 2);
  CHECK(v[0].line == 1);
  CHECK(v[1].line == 3);
  CHECK(v[1].value == 2.5e-4);
  std::istringstream bad("1\n2x\n");
  CHECK_THROWS_AS(nodedens::cli::parse_power_lines(bad), nodedens::cli::DataError);
}
