#pragma once

#include <functional>

namespace pmpqoc {

// Hardware concurrency capped by PMP_QOC_THREADS when set.
int max_threads();

// Runs body(i) for i in [0, n) on up to max_threads() workers.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace pmpqoc
