#pragma once

// Chunked parallel execution with a deterministic merge: the input range is
// split into fixed-size chunks, workers pull chunks from an atomic counter,
// and results are concatenated in chunk order regardless of scheduling.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace trisquare {

// TRISQUARE_THREADS caps worker count; defaults to hardware concurrency.
inline unsigned max_threads() {
    if (const char* s = std::getenv("TRISQUARE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v >= 1) return static_cast<unsigned>(v > 256 ? 256 : v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// fn(lo, hi) -> std::vector<T> over [lo, hi); returns the concatenation over
// consecutive chunks of [begin, end).
template <typename Fn>
auto parallel_chunk_map(std::uint64_t begin, std::uint64_t end, std::uint64_t chunk,
                        unsigned threads, Fn&& fn) {
    using Result = std::invoke_result_t<Fn, std::uint64_t, std::uint64_t>;
    using Value = typename Result::value_type;

    if (chunk == 0) chunk = 1;
    if (threads == 0) threads = max_threads();
    if (begin >= end) return Result{};

    std::uint64_t span = end - begin;
    std::uint64_t n_chunks = (span + chunk - 1) / chunk;
    if (n_chunks == 1 || threads == 1) return fn(begin, end);

    std::vector<Result> slots(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::uint64_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            std::uint64_t lo = begin + i * chunk;
            std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
            slots[i] = fn(lo, hi);
        }
    };

    unsigned n_workers = threads < n_chunks ? threads : static_cast<unsigned>(n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Result out;
    std::size_t total = 0;
    for (const auto& s : slots) total += s.size();
    out.reserve(total);
    for (auto& s : slots) {
        for (Value& v : s) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace trisquare
