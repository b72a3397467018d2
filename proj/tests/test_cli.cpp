#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = "./polymnd " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  while (fgets(buf.data(), (int)buf.size(), p)) out += buf.data();
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("list prints the catalogue with verdicts") {
  auto r = run("list");
  CHECK(r.code == 0);
  CHECK(r.out.find("monoids / linear rooted trees / yes") != std::string::npos);
  CHECK(r.out.find("props / loop-free directed graphs / no") != std::string::npos);
  auto f = run("list monoid");
  CHECK(f.out.find("monoids") != std::string::npos);
  CHECK(f.out.find("cyclic /") == std::string::npos);
}

TEST_CASE("certify exit codes and verify round trip") {
  auto tame = run("certify --monad monoids --bound 5 --out cert_m.json");
  CHECK(tame.code == 0);
  auto v = run("verify cert_m.json");
  CHECK(v.code == 0);
  CHECK(v.out.find("verified") != std::string::npos);

  auto bad = run("certify --monad symop --bound 5 --out cert_s.json");
  CHECK(bad.code == 1);
  auto v2 = run("verify cert_s.json");
  CHECK(v2.code == 0);
}

TEST_CASE("enumerate, classify and export produce output") {
  auto e = run("enumerate --monad monoids --bound 4");
  CHECK(e.code == 0);
  CHECK(e.out.find("L0") != std::string::npos);
  auto c = run("classify --monad monoids --bound 4 --kind semifree --json cls.json "
               "--dot cls.dot");
  CHECK(c.code == 0);
  std::ifstream dot("cls.dot");
  std::string text((std::istreambuf_iterator<char>(dot)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("digraph") != std::string::npos);
  CHECK(text.find("doublecircle") != std::string::npos);
}

TEST_CASE("compute pushout with oracle check prints PASS lines") {
  std::ofstream in("push.json");
  in << R"({
    "algebra": {"kind": "monoid-table", "elements": ["e", "a"],
                 "table": [[0, 1], [1, 1]], "unit": 0},
    "K": {"*": ["k"]},
    "L": {"*": ["l1", "l2"]},
    "u": {"*": [0]},
    "alpha": {"*": [1]},
    "kmax": 2
  })";
  in.close();
  auto r = run("compute pushout --monad monoids --bound 6 --input push.json "
               "--check-oracle --seed 7");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("compute is deterministic for a fixed seed") {
  std::ofstream in("free.json");
  in << R"({"collection": {"*": ["a", "b"]}})";
  in.close();
  auto a = run("compute free --monad monoids --bound 4 --input free.json --seed 3");
  auto b = run("compute free --monad monoids --bound 4 --input free.json --seed 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("malformed input exits with the usage code") {
  std::ofstream in("bad.json");
  in << "{ not json";
  in.close();
  auto r = run("compute pushout --monad monoids --input bad.json");
  CHECK(r.code == 64);
  auto r2 = run("certify --monad no-such-monad");
  CHECK(r2.code == 64);
}

TEST_CASE("obstruction command finds the witness") {
  auto r = run("obstruction");
  CHECK(r.code == 0);
  CHECK(r.out.find("sym2_homology_f2") != std::string::npos);
  CHECK(r.out.find("\"0\": 2") != std::string::npos);
}

TEST_CASE("user monad from json works through the CLI") {
  std::ofstream in("user_monad.json");
  in << R"({
    "name": "walking-idempotent-free",
    "ops": [
      {"id": "u", "target": "*", "fiber": ["*"]},
      {"id": "m", "target": "*", "fiber": ["*", "*"]}
    ],
    "unit": {"*": "u"}
  })";
  in.close();
  auto r = run("enumerate --monad-json user_monad.json --bound 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("m") != std::string::npos);
}
