#include "rab/parallel.hpp"

#include <cstdlib>
#include <cstring>

namespace rab::par {

bool openmp_compiled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Mode default_mode() {
  const char* env = std::getenv("RAB_SERIAL");
  if (env && std::strcmp(env, "0") != 0) return Mode::serial;
  return openmp_compiled() ? Mode::openmp : Mode::serial;
}

}  // namespace rab::par
