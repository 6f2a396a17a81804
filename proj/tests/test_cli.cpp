#include "doctest.h"
#include "qwitness/cli.hpp"
#include "qwitness/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace qwitness;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qwitness");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("qwitness_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string write_state(const std::string& name, const ComplexMatrix& m) {
  return write(name, io::state_to_json(make_density(m), name).dump());
}

ComplexMatrix proj(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  v.normalize();
  return v * v.adjoint();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("witness command") {
  const std::string zero = write_state("zero.json", proj(1, 0));
  const std::string plus = write_state("plus.json", proj(1, 1));
  const Run r = run({"witness", zero, plus});
  CHECK(r.code == exit_code::kWitnessed);
  CHECK(r.err.empty());
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j.at("min_eigenvalue").get<double>() - (1 - std::sqrt(2.0)) / 2) < 1e-12);
  CHECK(j.at("verdict") == "NONPOSITIVE_WITNESSED");
  CHECK(j.contains("purity_criterion"));
  CHECK(j.contains("tolerances"));
  CHECK(j.at("witness_vector").size() == 2);

  const std::string half = write_state("half.json", ComplexMatrix::Identity(2, 2) / 2.0);
  CHECK(run({"witness", half, half}).code == exit_code::kOk);
  CHECK(run({"witness", "mixed:2", "bloch:0,0,0"}).code == exit_code::kOk);

  const Run bad = run({"witness", write("bad.json", "{\"entries\": [[[1,0]"), half});
  CHECK(bad.code == exit_code::kInput);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
  CHECK(run({"witness", write("rect.json", "{\"entries\": [[[1,0],[0,0]]]}"), half}).code == exit_code::kInput);
  CHECK(run({"witness", write("neg.json", "{\"entries\": [[[1.1,0],[0,0]],[[0,0],[-0.1,0]]]}"), half}).code ==
        exit_code::kInput);
  CHECK(run({"witness", scratch().string() + "/missing.json", half}).code == exit_code::kInput);
  CHECK(run({"witness", half}).code == exit_code::kInput);
  CHECK(run({"witness", "bloch:2,0,0", half}).code == exit_code::kInput);
  CHECK(run({"witness", "mixed:3", half}).code == exit_code::kInput);
}

TEST_CASE("nested command") {
  const Run r = run({"--format", "jsonl", "nested", "bloch:0,0,0.4", "bloch:0.4,0,0"});
  CHECK(r.code == exit_code::kWitnessed);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("m").get<int>() >= 1);
  CHECK(j.at("n").get<int>() >= 1);
  CHECK(j.at("condition_met").get<bool>());
  CHECK(run({"nested", "bloch:0,0,0.4", "bloch:0,0,-0.2"}).code == exit_code::kCommuting);
  CHECK(run({"nested", "mixed:2", "bloch:0.4,0,0"}).code == exit_code::kDegenerate);
}

TEST_CASE("amplify command") {
  const std::string rho = write_state("d64.json", ComplexMatrix(Eigen::Vector2cd(0.6, 0.4).asDiagonal()));
  const Run r = run({"amplify", rho, "--target", "0.05"});
  CHECK(r.code == exit_code::kOk);
  CHECK(nlohmann::json::parse(r.out).at("n") == 8);
  const Run a = run({"amplify", rho, "--n", "2"});
  const auto m = io::matrix_from_json(nlohmann::json::parse(a.out).at("state"));
  CHECK(std::abs(m(0, 0).real() - 9.0 / 13) < 1e-15);
  CHECK(run({"amplify", "mixed:2"}).code == exit_code::kDegenerate);
  CHECK(run({"amplify", rho, "--target", "1.5"}).code == exit_code::kInput);
}

TEST_CASE("circuit command") {
  const std::string zero = write_state("c0.json", proj(1, 0));
  const std::string plus = write_state("c1.json", proj(1, 1));
  const std::string report = write("w.json", run({"witness", zero, plus}).out);
  const Run r = run({"circuit", "--states", zero, plus, "--probe", report});
  CHECK(r.code == exit_code::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("exact").get<double>() == doctest::Approx(-0.103553).epsilon(1e-5));
  CHECK_FALSE(j.contains("estimate"));

  const Run s = run({"--seed", "11", "circuit", "--states", zero, plus, "--probe", report, "--shots", "100000"});
  const auto js = nlohmann::json::parse(s.out);
  CHECK(js.at("seed") == 11);
  // exact target (1 - sqrt 2) / 4; the rounded -0.1036 would give 2305
  CHECK(js.at("shots_to_resolve").get<int>() == 2307);
  CHECK(std::abs(js.at("estimate").get<double>() - js.at("exact").get<double>()) <=
        5 * js.at("stderr").get<double>());
  CHECK(run({"circuit", "--states", zero, plus, "--probe", report, "--shots", "0"}).code == exit_code::kInput);
  CHECK(run({"circuit", "--states", zero, "--copies", "3", "--probe", "bloch:0,0,1"}).code == exit_code::kOk);
  CHECK(run({"--cap", "8", "circuit", "--states", zero, plus, "--probe", report}).code == exit_code::kCapacity);
}

TEST_CASE("discord-demo command") {
  const Run r = run({"discord-demo", "--state", "bell", "--ops", "z,x", "--outcomes", "0,+"});
  CHECK(r.code == exit_code::kWitnessed);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j.at("min_eigenvalue").get<double>() - (1 - std::sqrt(2.0)) / 2) < 1e-10);
  CHECK(j.at("conditionals").size() == 2);
  CHECK(run({"discord-demo", "--state", "bell", "--ops", "z,z", "--outcomes", "0,1"}).code == exit_code::kOk);
  CHECK(run({"discord-demo", "--state", "werner:0.5"}).code == exit_code::kWitnessed);
  CHECK(run({"discord-demo", "--ops", "z,q"}).code == exit_code::kInput);

  ComplexMatrix cq = ComplexMatrix::Zero(4, 4);
  cq(0, 0) = 1.0;
  const std::string file = write_state("cq.json", cq);
  CHECK(run({"discord-demo", "--state", file, "--ops", "z,z", "--outcomes", "0,1"}).code == exit_code::kNullOutcome);
}

TEST_CASE("scan command") {
  const Run t1 = run({"--seed", "1", "scan", "theorem1", "--trials", "1000"});
  CHECK(t1.code == exit_code::kOk);
  const auto ls = lines(t1.out);
  REQUIRE(ls.size() == 1001);
  const auto summary = nlohmann::json::parse(ls.back());
  CHECK(summary.at("counterexamples") == 0);
  CHECK(summary.at("seed") == 1);
  CHECK(summary.contains("version"));

  const Run a = run({"--seed", "5", "scan", "theorem1", "--trials", "1"});
  const Run b = run({"--seed", "5", "scan", "theorem1", "--trials", "1"});
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 2);

  const Run j1 = run({"--seed", "9", "scan", "lemma1", "--trials", "60"});
  const Run j4 = run({"--seed", "9", "--jobs", "4", "scan", "lemma1", "--trials", "60"});
  CHECK(j1.out == j4.out);

  const Run grid = run({"--format", "csv", "scan", "bloch", "--grid", "10"});
  const auto rows = lines(grid.out);
  CHECK(rows.size() == 101);
  CHECK(rows.front() == "r1,r2,condition,min_eigenvalue");

  const std::string csv = (scratch() / "t.csv").string();
  CHECK(run({"scan", "discord", "--trials", "10", "--csv", csv}).code == exit_code::kOk);
  CHECK(fs::exists(csv));
  CHECK(run({"scan", "bogus"}).code == exit_code::kInput);
  CHECK(run({"scan", "theorem1", "--trials", "0"}).code == exit_code::kInput);

  const Run timed = run({"scan", "lemma1", "--trials", "3", "--timing"});
  CHECK(nlohmann::json::parse(lines(timed.out).back()).contains("elapsed_ms"));
}

TEST_CASE("seed from the environment") {
  ::setenv("QWITNESS_SEED", "77", 1);
  const Run r = run({"scan", "theorem1", "--trials", "2"});
  CHECK(nlohmann::json::parse(lines(r.out).back()).at("seed") == 77);
  const Run flag = run({"--seed", "3", "scan", "theorem1", "--trials", "2"});
  CHECK(nlohmann::json::parse(lines(flag.out).back()).at("seed") == 3);
  ::setenv("QWITNESS_SEED", "x", 1);
  CHECK(run({"scan", "theorem1", "--trials", "2"}).code == exit_code::kInput);
  ::unsetenv("QWITNESS_SEED");
}

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == exit_code::kOk);
  CHECK(run({}).code == exit_code::kInput);
  CHECK(run({"frobnicate"}).code == exit_code::kInput);
  CHECK(run({"--format", "xml", "witness", "mixed:2", "mixed:2"}).code == exit_code::kInput);
}
