#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "polymnd/classifier.hpp"
#include "polymnd/monad.hpp"
#include "polymnd/par.hpp"

using namespace polymnd;

namespace {

// canonical serialization of a component analysis for path comparison
std::string fingerprint(const MonadPtr& T, int bound) {
  Classifier cls(T, ClsKind::Semifree, bound);
  auto comps = components(cls);
  std::vector<std::string> lines;
  for (auto& c : comps) {
    std::string s = c.verdict + "|";
    std::vector<std::string> mem;
    for (auto& m : c.members) mem.push_back(cls.object_text(m));
    std::sort(mem.begin(), mem.end());
    for (auto& m : mem) s += m + ",";
    s += "|";
    std::vector<std::string> cand;
    for (auto& t : c.terminal_candidates) cand.push_back(cls.object_text(t));
    std::sort(cand.begin(), cand.end());
    for (auto& t : cand) s += t + ",";
    lines.push_back(s);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

TEST_CASE("serial reference and OpenMP kernel agree on component analysis") {
  for (const char* name : {"monoids", "nsoperads", "symop-normal"}) {
    setenv("POLYMND_SERIAL", "1", 1);
    auto serial = fingerprint(builtin(name), 5);
    unsetenv("POLYMND_SERIAL");
    auto parallel = fingerprint(builtin(name), 5);
    CHECK(serial == parallel);
  }
}

TEST_CASE("par_map covers the index range in both modes") {
  auto f = std::function<int(int)>([](int i) { return i * i; });
  setenv("POLYMND_SERIAL", "1", 1);
  auto a = par_map<int>(100, f);
  unsetenv("POLYMND_SERIAL");
  auto b = par_map<int>(100, f);
  CHECK(a == b);
  CHECK(a[7] == 49);
}

TEST_CASE("POLYMND_THREADS caps the worker count") {
  setenv("POLYMND_THREADS", "1", 1);
  CHECK(par_threads() == 1);
  unsetenv("POLYMND_THREADS");
}
