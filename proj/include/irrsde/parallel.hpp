#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace irrsde {

/// Monte Carlo run parameters shared by every estimator.
struct McOptions {
    std::size_t n_paths = 1000;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;  ///< 0: hardware concurrency
    std::size_t chunk_size = 256;
    std::size_t base_steps = 1;  ///< grid at level l has base_steps * 2^l steps
};

unsigned resolve_threads(unsigned requested) noexcept;

/// Per-path results, one row of `width` doubles per path, row-major.
struct PathTable {
    std::size_t n_paths = 0;
    std::size_t width = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * width, width}; }
    double at(std::size_t i, std::size_t c) const { return data[i * width + c]; }
};

/**
 * Runs fn(path_index, row) for every path on a worker pool. Chunks of
 * chunk_size consecutive paths are handed out dynamically; rows are written
 * in place, so the table does not depend on scheduling. The first exception
 * thrown by fn is rethrown after all workers stop.
 */
template <class Fn>
PathTable run_paths(std::size_t width, const McOptions& opts, Fn&& fn) {
    PathTable table{opts.n_paths, width, std::vector<double>(opts.n_paths * width, 0.0)};
    const std::size_t chunk = std::max<std::size_t>(1, opts.chunk_size);
    const std::size_t n_chunks = (opts.n_paths + chunk - 1) / chunk;
    const unsigned workers = std::min<unsigned>(resolve_threads(opts.threads), static_cast<unsigned>(std::max<std::size_t>(1, n_chunks)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                const std::size_t end = std::min(opts.n_paths, (c + 1) * chunk);
                for (std::size_t i = c * chunk; i < end; ++i) {
                    fn(i, std::span<double>(table.data.data() + i * width, width));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

/// Pairwise summation; order depends only on the length of the input.
double pairwise_sum(std::span<const double> values) noexcept;

/// Sum of column c of the table: sequential within chunks of chunk_size
/// rows, pairwise across chunk totals.
double column_sum(const PathTable& table, std::size_t column, std::size_t chunk_size);

/// Same reduction applied to f(value) for each entry of the column.
template <class F>
double column_sum(const PathTable& table, std::size_t column, std::size_t chunk_size, F&& f) {
    const std::size_t chunk = std::max<std::size_t>(1, chunk_size);
    std::vector<double> partial;
    partial.reserve(table.n_paths / chunk + 1);
    for (std::size_t start = 0; start < table.n_paths; start += chunk) {
        double s = 0.0;
        const std::size_t end = std::min(table.n_paths, start + chunk);
        for (std::size_t i = start; i < end; ++i) s += f(table.at(i, column));
        partial.push_back(s);
    }
    return pairwise_sum(partial);
}

}  // namespace irrsde
