#pragma once

#include <cstddef>
#include <functional>

namespace fantone {

// Worker count used when a call site passes 0. Defaults to the hardware
// concurrency; overridden by set_default_threads.
void set_default_threads(unsigned n);
unsigned default_threads();

// Runs task(i) for i in [0, count) on up to `threads` workers (0 = default).
// Tasks must write to disjoint outputs; any exception is rethrown on the
// calling thread after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace fantone
