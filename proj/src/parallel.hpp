#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef PCLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace pclab::detail {

/// Runs body(i) for i in [0, n) across OpenMP threads. Exceptions cannot
/// leave a parallel region, so each is captured and the one with the lowest
/// index is rethrown afterwards.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#ifdef PCLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace pclab::detail
