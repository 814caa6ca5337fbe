#pragma once

namespace nep {

/// Selects the serial reference path or the OpenMP path of a kernel.  Both
/// produce identical results; the serial one is kept for testing.
enum class Execution { serial, parallel };

/// Applies NEP_THREADS (0 or unset = OpenMP default) to the OpenMP runtime.
void configure_threads_from_env();

/// Number of threads the parallel path will use.
int max_threads();

}  // namespace nep
