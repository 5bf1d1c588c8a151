#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

using nlohmann::json;

struct RunResult {
  int rc = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(OMF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() / ("omf-cli-test-" + tag);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

} // namespace

TEST_CASE("build-lattice emits the discriminant it was asked for", "[cli]") {
  RunResult r = run("build-lattice --level 11 --disc 11");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  CHECK(j["level"] == 11);
  CHECK(j["disc"] == 11);
  CHECK(j["form"]["discriminant"] == 11);
}

TEST_CASE("validation failures exit with code 2", "[cli]") {
  CHECK(run("build-lattice --level 15 --disc 15").rc == 2);       // sign parity of ramification
  CHECK(run("build-lattice --level 12 --disc 3").rc == 2);        // even level
  CHECK(run("hecke --level 11 --primes 11").rc == 2);             // p divides N
  CHECK(run("hecke --level 11 --primes nonsense").rc == 2);
  CHECK(run("eigenforms --level 11 --character 7").rc == 2);      // 7 does not divide 11
  CHECK(run("classset --level 11 --disc 77").rc == 2);
  CHECK(run("frobnicate --level 11").rc == 2);                    // unknown subcommand
}

TEST_CASE("classset caches and survives cache corruption", "[cli]") {
  auto dir = fresh_dir("cache");
  std::string base = "classset --level 11 --cache-dir " + dir.string();
  RunResult first = run(base);
  REQUIRE(first.rc == 0);
  json j1 = json::parse(first.out);
  CHECK(j1["count"] == 2);
  CHECK(j1["massCheck"] == "ok");
  CHECK(j1["cache"] == "miss");

  RunResult second = run(base);
  json j2 = json::parse(second.out);
  CHECK(j2["cache"] == "hit");
  j1.erase("cache");
  j2.erase("cache");
  CHECK(j1 == j2); // identical data either way

  RunResult third = run(base);
  CHECK(third.out == second.out); // byte-identical once warm

  // corrupt the cached document; the run must fall back to recomputing
  bool corrupted = false;
  for (auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ofstream f(entry.path(), std::ios::trunc);
    f << "{\"version\": 999}";
    corrupted = true;
  }
  REQUIRE(corrupted);
  RunResult after = run(base);
  REQUIRE(after.rc == 0);
  json j4 = json::parse(after.out);
  CHECK(j4["cache"] == "miss");
  j4.erase("cache");
  CHECK(j4 == j2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("hecke prints the level 11 matrices", "[cli]") {
  RunResult r = run("hecke --level 11 --primes 2,3,5");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  CHECK(j["character"] == 1);
  REQUIRE(j["matrices"].size() == 3);
  CHECK(j["matrices"][0]["p"] == 2);
  CHECK(j["matrices"][0]["rows"] == json::parse("[[1,2],[3,0]]"));
  CHECK(j["matrices"][1]["rows"] == json::parse("[[2,2],[3,1]]"));
  CHECK(j["matrices"][2]["rows"] == json::parse("[[4,2],[3,3]]"));
}

TEST_CASE("eigenforms reports the level 11 newform with its label", "[cli]") {
  RunResult r = run("eigenforms --level 11 --primes \"to 20\"");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  REQUIRE(j["eigensystems"].size() == 1);
  const json& e = j["eigensystems"][0];
  CHECK(e["dimension"] == 1);
  CHECK(e["fieldDegree"] == 1);
  CHECK(e["ellipticCurveCandidate"] == true);
  CHECK(e["eigenvalues"]["2"] == -2);
  CHECK(e["eigenvalues"]["3"] == -1);
  CHECK(e["eigenvalues"]["5"] == 1);
  CHECK(e["space"] == "S2^{11-new}(Gamma0(11)) with w_11 = -1");
}

TEST_CASE("an empty cuspidal space is an empty list, not an error", "[cli]") {
  RunResult r = run("eigenforms --level 105 --character 3 --primes 2");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  CHECK(j["character"] == 3);
  CHECK(j["eigensystems"].empty());
}

TEST_CASE("output is byte-identical across runs and thread counts", "[cli]") {
  RunResult a = run("eigenforms --level 105 --character all --primes 2,11 --threads 1");
  RunResult b = run("eigenforms --level 105 --character all --primes 2,11 --threads 3");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  RunResult c = run("hecke --level 33 --character all --primes \"to 7\"");
  RunResult d = run("hecke --level 33 --character all --primes \"to 7\"");
  REQUIRE(c.rc == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("table format stays human-oriented", "[cli]") {
  RunResult r = run("classset --level 11 --format table");
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("classes 2") != std::string::npos);
  CHECK(r.out.find("mass 5/24") != std::string::npos);
  RunResult h = run("hecke --level 11 --primes 2 --format table");
  CHECK(h.out.find("T_2") != std::string::npos);
}

TEST_CASE("clifford round trips the seed form through its even order", "[cli]") {
  RunResult r = run("clifford --level 11 --disc 11");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  CHECK(j["reducedDiscriminant"] == 11);
  CHECK(j["exteriorForm"] == j["form"]["form"]);
  REQUIRE(j["table"].size() == 4);
  // the identity row: 1 * e_t = e_t
  for (int t = 0; t < 4; ++t)
    for (int d = 0; d < 4; ++d) CHECK(j["table"][0][t][d] == (d == t ? 1 : 0));
}
