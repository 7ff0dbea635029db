#pragma once

// Chunked parallel loops whose results do not depend on the thread count:
// work is split into fixed-size chunks, each chunk is reduced sequentially,
// and the per-chunk partials are combined by a pairwise tree in chunk order.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qhb::parallel {

inline constexpr std::size_t kDefaultChunk = 4096;

/// Worker cap from QHB_THREADS; unset or 0 means hardware concurrency.
inline std::size_t worker_count() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QHB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

/// Calls fn(chunk_index) for every chunk, possibly concurrently.
template <class Fn>
void for_each_chunk(std::size_t chunks, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) fn(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

template <class T, class Combine>
T tree_reduce(std::vector<T> parts, Combine&& combine) {
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(combine(parts[i], parts[i + 1]));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

/// Reduces fn(begin, end) over [0, count) split into `chunk` sized pieces.
template <class T, class ChunkFn, class Combine>
T chunked_reduce(std::size_t count, ChunkFn&& fn, Combine&& combine, T empty, std::size_t chunk = kDefaultChunk) {
  if (count == 0) return empty;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<T> parts(chunks, empty);
  for_each_chunk(chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    parts[c] = fn(begin, std::min(count, begin + chunk));
  });
  return tree_reduce(std::move(parts), combine);
}

}  // namespace qhb::parallel
