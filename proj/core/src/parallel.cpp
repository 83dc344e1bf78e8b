#include "chernoff/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace chernoff {

unsigned worker_count() {
  if (const char* env = std::getenv("CHERNOFF_WORKERS")) {
    try {
      long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(std::min(n, 256L));
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
  const unsigned workers = worker_count();
  if (workers <= 1 || n < 2 * min_chunk) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, (n + min_chunk - 1) / min_chunk);
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<std::thread> threads;
  threads.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t b = c * per, e = std::min(n, b + per);
    if (b < e) threads.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, per));
  for (auto& t : threads) t.join();
}

}  // namespace chernoff
