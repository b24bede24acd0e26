#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "binthr/exact.hpp"

namespace binthr {

inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Chunk {
  Index begin;  // inclusive
  Index end;    // inclusive
};

// Splits [begin, end] into at most `parts` contiguous chunks, none shorter
// than `min_len` unless the whole range is.
inline std::vector<Chunk> partition_range(Index begin, Index end, unsigned parts, Index min_len = 1) {
  std::vector<Chunk> chunks;
  if (begin > end) return chunks;
  const Index len = end - begin + 1;
  Index count = std::max<Index>(1, std::min<Index>(parts, len / std::max<Index>(1, min_len)));
  const Index base = len / count;
  const Index extra = len % count;
  Index at = begin;
  for (Index i = 0; i < count; ++i) {
    const Index size = base + (i < extra ? 1 : 0);
    chunks.push_back({at, at + size - 1});
    at += size;
  }
  return chunks;
}

// Runs fn(chunk_index, chunk) for every chunk, one thread per chunk beyond the
// first (which runs on the caller). The first exception thrown is rethrown.
template <typename Fn>
void for_each_chunk(const std::vector<Chunk>& chunks, Fn&& fn) {
  if (chunks.size() <= 1) {
    if (!chunks.empty()) fn(std::size_t{0}, chunks.front());
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](std::size_t i) {
    try {
      fn(i, chunks[i]);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::jthread> workers;
  workers.reserve(chunks.size() - 1);
  for (std::size_t i = 1; i < chunks.size(); ++i) workers.emplace_back(guarded, i);
  guarded(0);
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace binthr
