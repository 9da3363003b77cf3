#include "swarmthresh/parallel.hpp"

#include <cstdlib>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace swarmthresh {

int worker_count() {
#if defined(_OPENMP)
    int available = omp_get_max_threads();
#else
    int available = 1;
#endif
    if (const char *env = std::getenv("SWARMTHRESH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    return available;
}

} // namespace swarmthresh
