#ifndef LEVYFIELD_PARALLEL_HPP
#define LEVYFIELD_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "levyfield/rng.hpp"

namespace levyfield {

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// fn(path_index, rng) over n_paths indices, one derived rng stream per index.
/// Results must be written to per-index slots; under that discipline the
/// worker count cannot change any output bit.
template <class Fn>
void for_each_path(std::int64_t n_paths, int workers, std::uint64_t master_seed,
                   Fn&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n_paths < 2) {
        for (std::int64_t i = 0; i < n_paths; ++i) {
            PathRng rng(master_seed, static_cast<std::uint64_t>(i));
            fn(i, rng);
        }
        return;
    }
    const std::int64_t chunk =
        std::max<std::int64_t>(1, n_paths / (static_cast<std::int64_t>(workers) * 16));
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        try {
            for (;;) {
                const std::int64_t begin = next.fetch_add(chunk);
                if (begin >= n_paths) return;
                const std::int64_t end = std::min(begin + chunk, n_paths);
                for (std::int64_t i = begin; i < end; ++i) {
                    PathRng rng(master_seed, static_cast<std::uint64_t>(i));
                    fn(i, rng);
                }
            }
        } catch (...) {
            std::lock_guard lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace detail {
template <class Term>
double pairwise_reduce(const Term& term, std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    if (n <= 32) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_reduce(term, begin, mid) + pairwise_reduce(term, mid, end);
}
} // namespace detail

/// Fixed-shape pairwise summation: the result is a pure function of the data,
/// independent of how the data was produced or by how many workers.
inline double pairwise_sum(std::span<const double> v) {
    return detail::pairwise_reduce([&](std::size_t i) { return v[i]; }, 0, v.size());
}

template <class Term>
double pairwise_sum_of(std::size_t n, const Term& term) {
    return detail::pairwise_reduce(term, 0, n);
}

} // namespace levyfield

#endif
