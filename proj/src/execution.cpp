#include "nep/execution.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace nep {

void configure_threads_from_env()
{
    const char* env = std::getenv("NEP_THREADS");
    if (env == nullptr) {
        return;
    }
    try {
        int n = std::stoi(env);
        omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
    } catch (const std::exception&) {
        // Ignore malformed values; the OpenMP default stays in effect.
    }
}

int max_threads()
{
    return omp_get_max_threads();
}

}  // namespace nep
