#include <hcurl/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hcurl {

namespace {

unsigned initial_limit() {
  if (const char* env = std::getenv("HCURL_AMG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& limit_storage() {
  static std::atomic<unsigned> limit{initial_limit()};
  return limit;
}

} // namespace

unsigned thread_limit() { return limit_storage().load(); }

void set_thread_limit(unsigned n) { limit_storage().store(std::max(1u, n)); }

void parallel_for(Index n, const std::function<void(Index, Index)>& body, Index min_chunk) {
  if (n <= 0) return;
  const auto max_workers = static_cast<Index>(thread_limit());
  const Index workers = std::min<Index>(max_workers, std::max<Index>(1, n / std::max<Index>(1, min_chunk)));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const Index chunk = (n + workers - 1) / workers;
  for (Index w = 1; w < workers; ++w) {
    const Index b = w * chunk;
    const Index e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, chunk));
}

} // namespace hcurl
