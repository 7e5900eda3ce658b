#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace otsense {

/// Worker count used when a caller passes 0: OTSENSE_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency().
unsigned default_thread_count() noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Each index runs exactly once; callers write results into slot i so output
/// order never depends on scheduling. If bodies throw, the exception from the
/// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Counter-based substream: a 64-bit engine seeded from (seed, stream, sub)
/// through SplitMix64, so every (replicate, row, attempt) gets an independent
/// reproducible generator regardless of execution order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0);

}  // namespace otsense
