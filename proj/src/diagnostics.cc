#include "artifact_audit/diagnostics.h"

#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace artifact_audit {

void warnToStderr(const std::string& msg) {
  std::cerr << "warning: " << msg << std::endl;
}

int configuredThreads() {
  if (const char* env = std::getenv("ARTIFACT_AUDIT_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) {
      return static_cast<int>(n);
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void applyThreadLimit() {
#ifdef _OPENMP
  omp_set_num_threads(configuredThreads());
#endif
}

}  // namespace artifact_audit
