#pragma once

namespace lc {

// Thread cap for internal parallelism: LATTICE_CHAMFER_THREADS if set, else the OpenMP default.
int default_threads();

// `requested` if positive, otherwise default_threads().
int resolve_threads(int requested);

}  // namespace lc
