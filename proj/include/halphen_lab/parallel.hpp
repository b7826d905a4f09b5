#ifndef HALPHEN_LAB_PARALLEL_HPP
#define HALPHEN_LAB_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace hl {

/// Cap on worker threads; 0 restores the default (HALPHEN_LAB_THREADS, else
/// the hardware concurrency).
void set_thread_count(int n);
int thread_count();

/// Evaluates part(i) for i in [0, n_parts) on the worker pool and returns the
/// results in index order. The partition is fixed by the caller, so sums built
/// from the result do not depend on the thread count.
std::vector<double> parallel_parts(std::size_t n_parts, const std::function<double(std::size_t)>& part);

/// Runs body(i) for i in [0, n) on the worker pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace hl

#endif
