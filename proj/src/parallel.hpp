#pragma once

#include <cstdint>
#include <functional>

namespace jumpmil {

// Resolves a worker count: explicit request > 0 wins, then the
// JUMPMIL_THREADS environment variable, then hardware concurrency.
int resolve_thread_count(int requested);

// Runs body(i) for i in [0, n) on the given number of workers. Work items
// must write only to their own index slots; with that discipline results are
// identical for every worker count. The first exception thrown by any item
// is rethrown on the calling thread.
void parallel_for(std::uint64_t n, int threads, const std::function<void(std::uint64_t)>& body);

} // namespace jumpmil
