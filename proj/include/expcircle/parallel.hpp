#pragma once

#include <cstddef>
#include <functional>

namespace expcircle::parallel {

/// Worker count used by every internally parallel operation. Defaults to the
/// hardware concurrency; set once by the CLI `--threads` flag.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
/// one chunk per worker. Chunk boundaries depend only on n and the worker
/// count, and callers must not rely on execution order.
void for_range(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace expcircle::parallel
