#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#ifdef REO_HAVE_OPENMP
#include <omp.h>
#endif

namespace reo {

/// Selects between the serial reference loop and the OpenMP kernel. Both
/// produce bit-identical results: work items write to their own slot and are
/// combined by index afterwards.
enum class Execution { Serial, Parallel };

inline int max_threads() {
#ifdef REO_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef REO_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Calls fn(i) for i in [0, n). Under Execution::Parallel the iterations are
/// spread over OpenMP threads; an exception thrown by any iteration is
/// rethrown after the loop, choosing the one with the lowest index so that
/// failures are reported deterministically.
template <class Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  if (exec == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef REO_HAVE_OPENMP
  std::exception_ptr first;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace reo
