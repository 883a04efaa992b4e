#include "popergm/parallel.hpp"

#include <exception>
#include <mutex>
#include <omp.h>

namespace popergm {

int available_workers() { return omp_get_num_procs(); }

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
    int threads = workers > 0 ? workers : available_workers();
    if (threads <= 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long k = 0; k < n; ++k) {
        try {
            body(static_cast<std::size_t>(k));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace popergm
