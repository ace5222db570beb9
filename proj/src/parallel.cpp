#include "frec/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace frec {

int effective_threads() {
    int nt = omp_get_max_threads();
    if (const char* env = std::getenv("FRAME_RECOVER_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) nt = std::min(nt, cap);
        } catch (...) {
            // unparsable value: keep the runtime default
        }
    }
    return nt;
}

} // namespace frec
