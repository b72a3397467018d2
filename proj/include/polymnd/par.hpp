#pragma once
// OpenMP kernel helpers with a serial reference path. The environment
// variable POLYMND_THREADS caps the worker count; POLYMND_SERIAL=1 forces
// the serial path (used by the parallel-agreement tests and the benchmark).

#include <cstdlib>
#include <functional>
#include <vector>

#ifdef POLYMND_OPENMP
#include <omp.h>
#endif

namespace polymnd {

inline int par_threads() {
  if (const char* s = std::getenv("POLYMND_SERIAL"); s && s[0] == '1') return 1;
#ifdef POLYMND_OPENMP
  int n = omp_get_max_threads();
  if (const char* s = std::getenv("POLYMND_THREADS")) {
    int cap = std::atoi(s);
    if (cap > 0 && cap < n) n = cap;
  }
  return n;
#else
  return 1;
#endif
}

// Serial reference kept alongside the parallel path; results are merged in
// index order so both paths agree elementwise.
template <class R>
std::vector<R> par_map(int n, const std::function<R(int)>& f) {
  std::vector<R> out(n);
  int threads = par_threads();
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
#ifdef POLYMND_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) out[i] = f(i);
#else
  for (int i = 0; i < n; ++i) out[i] = f(i);
#endif
  return out;
}

}  // namespace polymnd
