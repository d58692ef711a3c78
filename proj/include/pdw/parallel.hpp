#pragma once

// Deterministic data-parallel Monte Carlo. Work items are split into fixed
// chunks before execution; chunk c draws from RngStream(seed, stream_base + c)
// so the output never depends on the thread count or on the policy.

#include "pdw/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdw {

enum class ExecPolicy { Serial, OpenMP };

struct Exec {
    ExecPolicy policy = ExecPolicy::OpenMP;
    std::size_t chunk = 256;
};

// Process-wide default used by every check and command.
Exec& default_exec();

// 0 selects the OpenMP runtime default.
void set_thread_count(int threads);
int thread_count();

// Stream ids for distinct sample groups inside one computation.
inline std::uint64_t stream_group(std::uint64_t group) { return group << 32; }

// out[i] = fn(i, rng) for i in [0, n).
template <class T, class F>
std::vector<T> parallel_generate(std::size_t n, std::uint64_t seed, std::uint64_t stream_base, F&& fn,
                                 const Exec& exec = default_exec()) {
    std::vector<T> out(n);
    const std::size_t chunk = exec.chunk == 0 ? 1 : exec.chunk;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    auto run_chunk = [&](std::size_t c) {
        RngStream rng(seed, stream_base + c);
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) out[i] = fn(i, rng);
    };
    if (exec.policy == ExecPolicy::Serial) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
        return out;
    }
    std::exception_ptr failure;
    const long long nc = static_cast<long long>(n_chunks);
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < nc; ++c) {
        try {
            run_chunk(static_cast<std::size_t>(c));
        } catch (...) {
#pragma omp critical(pdw_parallel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

// out[i] = fn(i) without randomness (e.g. quadrature grid points).
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn, const Exec& exec = default_exec()) {
    std::vector<T> out(n);
    if (exec.policy == ExecPolicy::Serial) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::exception_ptr failure;
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < nn; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(pdw_parallel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace pdw
