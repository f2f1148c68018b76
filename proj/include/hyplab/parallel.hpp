#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyplab {

// Runs fn(chunk) for chunk in [0, chunks) on up to `workers` threads and
// returns the per-chunk results in chunk order. Chunk boundaries are fixed by
// the caller, so the merged output never depends on the worker count.
template <class Fn>
auto parallel_chunks(std::size_t chunks, unsigned workers, Fn&& fn) {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> out(chunks);
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                out[c] = fn(c);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(chunks));
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

// Seed for chunk `chunk` of a run seeded with `seed` (splitmix64 finalizer).
inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Process-wide default worker count used by modules that parallelize internally.
unsigned default_workers();
void set_default_workers(unsigned n);

}  // namespace hyplab
