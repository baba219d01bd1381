#pragma once

#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace l2control {

// Execution policy for the per-block kernels.  Serial is the reference path;
// Parallel distributes blocks over OpenMP threads.  Results are bit-identical:
// parallel regions only ever write disjoint per-block slots, and every
// reduction runs serially in ascending block order afterwards.
enum class Exec { Serial, Parallel };

template <class F>
void for_each_block(Exec exec, int n, F&& body) {
#if defined(_OPENMP)
  if (exec == Exec::Parallel && n > 1 && !omp_in_parallel()) {
    // Exceptions may not escape an OpenMP region; stash the first one.
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical
        {
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)exec;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace l2control
