#include "gpwtdg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gpwtdg {

namespace {

int env_cap() {
  const char* s = std::getenv("GPWTDG_THREADS");
  if (!s || !*s) return 0;
  const long v = std::strtol(s, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 0;
}

}  // namespace

int effective_threads(int requested) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (const int cap = env_cap(); cap > 0) t = std::min(t, cap);
  return t;
}

bool deterministic_mode() { return env_cap() == 1; }

void parallel_for(int n, const std::function<void(int)>& body, int threads) {
  const int t = std::min(effective_threads(threads), std::max(n, 1));
  if (t <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(t);
  std::mutex error_mutex;
  std::exception_ptr error;
  for (int w = 0; w < t; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += t) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : workers) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gpwtdg
