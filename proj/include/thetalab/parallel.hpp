// Deterministic batched parallelism.
//
// Work is split into fixed contiguous batches; workers grab batch indices
// from an atomic counter, and partial results are combined strictly in batch
// order.  Totals are therefore bit-identical for any worker count, including
// for floating-point accumulators.  THETA_LAB_THREADS caps the worker count.
#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace thetalab {

inline unsigned worker_count() {
    if (const char* env = std::getenv("THETA_LAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Applies per_batch to [begin, end) slices of [0, n) and folds the partials
// in batch-index order with combine(acc, partial).
template <class Acc, class PerBatch, class Combine>
Acc batched_reduce(std::uint64_t n, std::uint64_t batch_size, Acc init,
                   PerBatch per_batch, Combine combine) {
    if (n == 0) return init;
    if (batch_size == 0) batch_size = 1;
    const std::uint64_t n_batches = (n + batch_size - 1) / batch_size;
    unsigned workers = worker_count();
    if (workers > n_batches) workers = static_cast<unsigned>(n_batches);

    std::vector<Acc> partials(n_batches, init);
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            std::uint64_t lo = b * batch_size;
            std::uint64_t hi = std::min(n, lo + batch_size);
            partials[b] = per_batch(lo, hi, b);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr first_error;
        std::atomic<bool> failed{false};
        auto work = [&] {
            for (;;) {
                std::uint64_t b = next.fetch_add(1);
                if (b >= n_batches || failed.load()) return;
                try {
                    std::uint64_t lo = b * batch_size;
                    std::uint64_t hi = std::min(n, lo + batch_size);
                    partials[b] = per_batch(lo, hi, b);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
        if (failed.load()) std::rethrow_exception(first_error);
    }

    Acc acc = init;
    for (std::uint64_t b = 0; b < n_batches; ++b) acc = combine(acc, partials[b]);
    return acc;
}

}  // namespace thetalab
