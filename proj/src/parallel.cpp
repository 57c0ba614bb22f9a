#include "thomjiggle/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

namespace thom {

int thread_cap() {
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("THOM_JIGGLE_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0 && v < cap) cap = v;
      if (v > 0 && cap <= 0) cap = v;
    } catch (const std::exception&) {
    }
  }
  return cap < 1 ? 1 : cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, ExecPolicy policy) {
  if (policy == ExecPolicy::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  long long error_index = -1;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_cap())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      // Report the lowest failing index so errors match the serial run.
      if (!error || i < error_index) {
        error = std::current_exception();
        error_index = i;
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace thom
