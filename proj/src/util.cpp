#include "boltzlayer/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>

namespace bbl {

namespace {
int g_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

int chunk_count(std::int64_t n) {
  if (n <= 0) return 0;
  return static_cast<int>(std::min<std::int64_t>(n, kMaxChunks));
}

void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
  const int nc = chunk_count(n);
  if (nc == 0) return;
  if (g_threads <= 1 || nc == 1) {
    for (int c = 0; c < nc; ++c) {
      const std::int64_t b = n * c / nc, e = n * (c + 1) / nc;
      fn(c, b, e);
    }
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= nc) return;
      const std::int64_t b = n * c / nc, e = n * (c + 1) / nc;
      fn(c, b, e);
    }
  };
  const int nthreads = std::min(g_threads, nc);
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  parallel_chunks(n, [&](int, std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) fn(i);
  });
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a(std::string_view bytes) { return fnv1a(bytes.data(), bytes.size()); }

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace bbl
