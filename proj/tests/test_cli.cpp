#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rezeta/cli.hpp"

using namespace rezeta;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rezeta");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"sigma0", "--bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"sigma0", "--digits", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"sigma0", "--strategy", "newton"}).code == cli::kExitUsage);
  CHECK(invoke({"mc", "--sigma", "1"}).code == cli::kExitUsage);
  const auto help = invoke({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("sigma0") != std::string::npos);
}

TEST_CASE("computation errors exit with 1") {
  const auto r = invoke({"certify", "--from", "5", "--to", "20"});
  CHECK(r.code == cli::kExitComputation);
  CHECK(r.err.find("t_lo >= 10") != std::string::npos);
  CHECK(invoke({"prime-zeta", "--sigma", "1.01"}).code == cli::kExitComputation);
  CHECK(invoke({"mc", "--sigma", "1", "--trials", "10", "--seed", "1", "--cutoff", "100"}).code ==
        cli::kExitComputation);
}

TEST_CASE("sigma0 text and json") {
  const auto text = invoke({"sigma0", "--digits", "10"});
  REQUIRE(text.code == 0);
  CHECK(text.out.rfind("1.1923473372\n", 0) == 0);
  CHECK(text.out.find("evaluations") != std::string::npos);
  const auto js = invoke({"sigma0", "--digits", "12", "--strategy", "convex", "--emit", "json"});
  REQUIRE(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["schema"] == 1);
  CHECK(j["sigma0"] == "1.192347337186");
  CHECK(j["strategy"] == "convex");
  CHECK(j["correctly_rounded"] == true);
}

TEST_CASE("prime-zeta") {
  const auto r = invoke({"prime-zeta", "--sigma", "2", "--digits", "20"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "0.45224742004106549851\n");
}

TEST_CASE("mc json at sigma = 2 has no negative hits") {
  const auto r = invoke({"mc", "--sigma", "2", "--trials", "1000", "--seed", "1", "--emit", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["negative_hits"] == 0);
  CHECK(j["config"]["prime_cutoff"] == 10000);
  CHECK(j.contains("ci95"));
  CHECK(j["diagnostics"].contains("tail_log_rms"));
}

TEST_CASE("scan csv reproduces the first table row") {
  const auto r = invoke({"scan", "--from", "682112.5", "--to", "682113.5", "--emit", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "t_min,re_zeta_min,t_start,t_end,length\n"
        "682112.9169,-0.0028,682112.8913,682112.9443,0.0529\n");
}

TEST_CASE("environment overrides") {
  setenv("REZETA_THREADS", "zero", 1);
  CHECK(invoke({"certify", "--from", "10", "--to", "20"}).code == cli::kExitComputation);
  setenv("REZETA_THREADS", "2", 1);
  CHECK(invoke({"certify", "--from", "10", "--to", "20"}).code == cli::kExitOk);
  unsetenv("REZETA_THREADS");

  const auto dir = std::filesystem::temp_directory_path() / "rezeta_cli_ckpt";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  setenv("REZETA_CHECKPOINT_DIR", dir.c_str(), 1);
  const auto r = invoke({"scan", "--from", "100", "--to", "101", "--checkpoint", "run.jsonl", "--emit", "json"});
  unsetenv("REZETA_CHECKPOINT_DIR");
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "run.jsonl");
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(nlohmann::json::parse(line)["schema"] == 1);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["windows"].empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("output file option") {
  const auto path = std::filesystem::temp_directory_path() / "rezeta_cli_out.txt";
  const auto r = invoke({"-o", path.string(), "certify", "--from", "10", "--to", "30"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("certified") != std::string::npos);
  std::filesystem::remove(path);
}
