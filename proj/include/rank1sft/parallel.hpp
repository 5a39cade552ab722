#pragma once

#include <cstddef>
#include <functional>

namespace rank1sft {

// Worker count: RANK1SFT_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks so the
// results written by index are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rank1sft
