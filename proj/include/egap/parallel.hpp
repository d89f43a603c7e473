#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace egap {

/// How per-component kernels are dispatched. `serial` is the reference path
/// kept for testing; `parallel` distributes components over OpenMP threads.
struct Execution {
  enum class Mode { serial, parallel };
  Mode mode = Mode::parallel;
  int num_threads = 0;  // 0 = OpenMP default

  static Execution serial() { return {Mode::serial, 1}; }
  static Execution parallel(int threads = 0) { return {Mode::parallel, threads}; }
};

/// Runs body(i) for every component index. Each body writes only to slot i
/// of its outputs, so the result does not depend on the thread count.
/// The exception thrown by the lowest failing index is rethrown.
template <class Body>
void for_each_component(const Execution& exec, std::size_t count, Body&& body) {
  if (exec.mode == Execution::Mode::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
#ifdef _OPENMP
  const int threads = exec.num_threads > 0 ? exec.num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace egap
