// Benchmark comparing the serial reference path with the OpenMP kernels on
// the classifier morphism-generation workload.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "polymnd/classifier.hpp"
#include "polymnd/monad.hpp"
#include "polymnd/par.hpp"

using namespace polymnd;

namespace {

double time_components(const char* name, int bound, bool serial) {
  if (serial) setenv("POLYMND_SERIAL", "1", 1);
  else unsetenv("POLYMND_SERIAL");
  auto T = builtin(name);
  Classifier cls(T, ClsKind::Semifree, bound);
  auto t0 = std::chrono::steady_clock::now();
  auto comps = components(cls);
  auto t1 = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::printf("  %-12s bound %d  %-8s %8.1f ms  (%zu components)\n", name, bound,
              serial ? "serial" : "openmp", ms, comps.size());
  return ms;
}

}  // namespace

int main(int argc, char** argv) {
  int scale = argc > 1 ? std::atoi(argv[1]) : 0;
  std::printf("classifier component analysis: serial reference vs OpenMP kernel\n");
  struct Case {
    const char* name;
    int bound;
  };
  Case cases[] = {{"monoids", scale ? 9 : 7},
                  {"nsoperads", scale ? 6 : 5},
                  {"symop-normal", scale ? 7 : 6},
                  {"NO(2)", scale ? 6 : 5}};
  for (auto& c : cases) {
    double s = time_components(c.name, c.bound, true);
    double p = time_components(c.name, c.bound, false);
    std::printf("  %-12s speedup x%.2f\n", c.name, p > 0 ? s / p : 0.0);
  }
  return 0;
}
