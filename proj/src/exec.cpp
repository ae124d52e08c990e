#include "mmtc/exec.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmtc {

int max_threads() {
#ifdef _OPENMP
    int t = omp_get_max_threads();
    if (const char* env = std::getenv("MMTC_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap > 0 && cap < t) t = cap;
        } catch (...) {
        }
    }
    return t < 1 ? 1 : t;
#else
    return 1;
#endif
}

}  // namespace mmtc
