#pragma once

#include <cstddef>
#include <functional>

namespace crosslink {

/// Caps worker parallelism for every parallel kernel. 0 restores the
/// default (hardware concurrency).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for every i in [0, n) across the configured workers.
/// Work items are claimed dynamically; callers keep results deterministic
/// by writing to slot i only.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Splits [0, n) into fixed-size chunks (independent of the thread count)
/// and runs body(begin, end) for each. Chunk boundaries depend only on n and
/// chunk_size, so per-chunk partial sums reduced in chunk order are
/// bit-identical at any worker count.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace crosslink
