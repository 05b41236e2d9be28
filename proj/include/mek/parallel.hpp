#pragma once

#include <functional>

namespace mek {

// Runs fn(0) .. fn(n-1) on up to `threads` workers with a static block
// partition. threads <= 1 degenerates to a plain loop. The first exception
// thrown by any worker is rethrown on the calling thread after all workers
// finish.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace mek
