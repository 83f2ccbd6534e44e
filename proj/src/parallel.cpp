#include "scpsim/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace scpsim {

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SCPSIM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const int workers = max_threads();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int used = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(workers)));
  pool.reserve(static_cast<std::size_t>(used));
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace scpsim
