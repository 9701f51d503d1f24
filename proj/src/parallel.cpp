#include "lattice_chamfer/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace lc {

int default_threads() {
    if (const char* s = std::getenv("LATTICE_CHAMFER_THREADS")) {
        try {
            const int n = std::stoi(s);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    return omp_get_max_threads();
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

}  // namespace lc
