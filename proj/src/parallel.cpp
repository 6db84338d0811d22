#include "frontlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace frontlab::parallel {

int configure_from_env() {
  if (const char* env = std::getenv("FRONTLAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0 && n < omp_get_max_threads()) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // Ignore malformed values; the default team size stays in effect.
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace frontlab::parallel
