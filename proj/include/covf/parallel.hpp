#pragma once

#include <functional>

namespace covf::par {

// Worker count: COVFOURIER_THREADS if set, else hardware concurrency.
int max_threads();

// Runs fn(i) for i in [begin, end) on a static block partition. Each index
// must write only its own output slot; with that discipline results do not
// depend on the worker count. Exceptions are captured and the first one
// (lowest index block) is rethrown.
void parallel_for(long long begin, long long end,
                  const std::function<void(long long)>& fn);

}  // namespace covf::par
