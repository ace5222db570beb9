#pragma once

namespace frec {

// Number of OpenMP threads parallel kernels should use: the runtime default,
// capped by the FRAME_RECOVER_THREADS environment variable when it is set to
// a positive integer.
int effective_threads();

} // namespace frec
