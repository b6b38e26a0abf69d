#pragma once

#include <cstddef>
#include <functional>

namespace taclab {

// Worker count used by parallel_for; 0 or 1 means serial.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n). Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace taclab
