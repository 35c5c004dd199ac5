#pragma once

#include <functional>

namespace ftz {

/// Worker count: FTZ_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Calls body(i) for i in [0, n). Each index runs exactly once; callers write
/// to disjoint outputs, so results do not depend on the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace ftz
