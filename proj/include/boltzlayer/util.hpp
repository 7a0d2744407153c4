#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bbl {

/// Global worker count for parallel loops. 0 or 1 means serial.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work is split into fixed chunks whose layout
/// does not depend on the worker count, so any reduction done per chunk and
/// combined in chunk order is deterministic.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

/// Chunked variant: fn(chunk_index, begin, end). Chunk layout is fixed by n
/// alone (at most kMaxChunks chunks), independent of the thread count.
inline constexpr int kMaxChunks = 16;
int chunk_count(std::int64_t n);
void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn);

/// FNV-1a 64-bit content hash, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t h);

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  /// Dotted path of the offending key, e.g. "equilibrium.rho_inf".
  std::string key;
  ConfigError(std::string key_, const std::string& what_)
      : std::runtime_error(what_), key(std::move(key_)) {}
};

}  // namespace bbl
