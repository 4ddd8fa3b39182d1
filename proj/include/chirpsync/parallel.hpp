#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace chirpsync {

// Execution policy for the data-parallel kernels (grid scans, trial batches).
// Serial is the reference path; results must not depend on the choice.
enum class Execution { serial, parallel };

// Runs fn(i) for i in [0, n). With Execution::parallel the iterations are
// distributed over OpenMP threads; fn must write only to per-index slots.
// The first exception thrown by any iteration is rethrown after the loop.
template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
    if (exec == Execution::parallel) {
        std::exception_ptr error = nullptr;
        std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
    }
}

}  // namespace chirpsync
