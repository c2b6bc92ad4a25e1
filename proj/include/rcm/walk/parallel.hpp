#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace rcm {

// Thread count after the RCM_THREADS override; requested <= 0 means one per hardware thread.
int resolve_threads(int requested);

// Runs fn(block, begin, end) over fixed-size blocks of [0, n). Block boundaries do not depend on the
// thread count, so per-block results reduced in block order are scheduler independent.
template <class Fn>
void parallel_blocks(uint64_t n, uint64_t block, int threads, Fn&& fn) {
  if (n == 0) return;
  const uint64_t blocks = (n + block - 1) / block;
  std::atomic<uint64_t> next{0};
  auto work = [&] {
    for (uint64_t b; (b = next.fetch_add(1)) < blocks;) fn(b, b * block, std::min(n, (b + 1) * block));
  };
  const int t = std::max(1, std::min<int>(threads, int(std::min<uint64_t>(blocks, 1024))));
  if (t == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < t; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace rcm
