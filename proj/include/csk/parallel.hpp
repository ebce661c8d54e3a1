#pragma once

#include <cstddef>
#include <functional>

namespace csk {

// Worker count used when a caller passes threads == 0: the value of
// CHARSEQ_KIT_THREADS if set, otherwise the hardware concurrency.
unsigned default_thread_count();

// Runs body(i) for i in [0, count). Each index is handled by exactly one
// worker, so writes to disjoint output slots are race free and the result does
// not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace csk
