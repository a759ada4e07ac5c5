#include "spiralscan/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spiralscan {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() { return g_max_threads.load(); }

void init_threads_from_env() {
  const char* v = std::getenv("SPIRALSCAN_THREADS");
  if (!v || !*v) return;
  try {
    set_max_threads(std::stoi(v));
  } catch (...) {
    set_max_threads(0);
  }
}

int threads_for(std::size_t work) {
#ifdef _OPENMP
  if (work < 4096) return 1;
  int hw = omp_get_max_threads();
  int cap = g_max_threads.load();
  int n = (cap > 0 && cap < hw) ? cap : hw;
  return n < 1 ? 1 : n;
#else
  (void)work;
  return 1;
#endif
}

} // namespace spiralscan
