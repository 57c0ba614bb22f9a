#pragma once

#include <cstddef>
#include <functional>

namespace thom {

/// Every data-parallel kernel takes a policy. Serial runs the same
/// per-element body in index order and is the reference in tests.
enum class ExecPolicy { Serial, Parallel };

/// Thread count honoring THOM_JIGGLE_THREADS (unset or invalid: OpenMP default).
int thread_cap();

/// Runs body(i) for i in [0, n). Bodies must only write to slot i of their
/// outputs, so results do not depend on the policy or the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, ExecPolicy policy);

}  // namespace thom
