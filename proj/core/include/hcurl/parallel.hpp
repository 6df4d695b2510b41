#pragma once

#include <hcurl/common.hpp>

#include <functional>

namespace hcurl {

/// Worker cap for internal kernels. Defaults to HCURL_AMG_THREADS when set,
/// otherwise the hardware concurrency.
unsigned thread_limit();
void set_thread_limit(unsigned n);

/// Runs body(begin, end) over [0, n) split into contiguous chunks. Falls back to
/// a single serial call for small ranges or a thread limit of 1.
void parallel_for(Index n, const std::function<void(Index, Index)>& body,
                  Index min_chunk = 4096);

} // namespace hcurl
