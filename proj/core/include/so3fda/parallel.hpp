#pragma once

#include <cstddef>
#include <functional>

namespace so3fda {

/// Number of worker threads used by parallel_for; 0 selects
/// std::thread::hardware_concurrency().
void set_worker_threads(std::size_t n);
std::size_t worker_threads();

/// Calls body(i) for i in [0, n), possibly concurrently. Bodies must write
/// results by index only. Nested calls run serially on the calling thread.
/// If bodies throw, the exception of the smallest failing index is rethrown
/// after all workers finish, so failures are reported deterministically.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace so3fda
