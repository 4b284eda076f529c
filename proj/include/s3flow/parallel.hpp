#pragma once

#include <cstddef>
#include <functional>

namespace s3flow {

/// Number of worker threads used by data-parallel loops. 0 means
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n). Work is split into contiguous chunks; the
/// body must only write to slots owned by index i, so results never depend
/// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace s3flow
