#pragma once

// Deterministic data parallelism. Work is cut into fixed-size chunks that do
// not depend on the thread count; each chunk is evaluated in ascending order
// and chunk results are combined in chunk order, so every output is
// bit-identical however many workers run.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/errors.hpp"
#include "kloos/modular.hpp"

namespace kloos {

inline constexpr i64 kChunkSize = 256;

/// Worker count: EXPSUM_THREADS when set to a positive integer, else
/// `requested`, else the hardware concurrency.
inline int resolve_threads(int requested) {
  if (const char* env = std::getenv("EXPSUM_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  if (requested >= 1) return requested;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

/// Calls body(chunk_index) for every chunk in [0, chunks), spread over the
/// given number of workers. Exceptions from the body are rethrown on the
/// calling thread (the first one by chunk index).
template <typename Body>
void for_each_chunk(i64 chunks, int threads, Body&& body) {
  threads = static_cast<int>(std::clamp<i64>(threads, 1, std::max<i64>(chunks, 1)));
  if (threads == 1) {
    for (i64 k = 0; k < chunks; ++k) body(k);
    return;
  }
  std::atomic<i64> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  auto worker = [&] {
    for (i64 k = next++; k < chunks; k = next++) {
      try {
        body(k);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// out[i] = fn(first + i) for i in [0, count).
template <typename T, typename Fn>
std::vector<T> parallel_map(i64 first, i64 count, int threads, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(std::max<i64>(count, 0)));
  const i64 chunks = (count + kChunkSize - 1) / kChunkSize;
  for_each_chunk(chunks, threads, [&](i64 k) {
    const i64 lo = k * kChunkSize, hi = std::min(count, lo + kChunkSize);
    for (i64 i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = fn(first + i);
  });
  return out;
}

/// For every stop n (nondecreasing, 0 <= n <= count) the partial sum
/// sum_{i < n} term(i). Within a chunk terms are added in ascending i; chunk
/// totals are then combined in chunk order.
template <typename Fn>
std::vector<cplx> ordered_prefix_sums(i64 count, std::span<const i64> stops, int threads,
                                      Fn&& term) {
  for (std::size_t s = 0; s < stops.size(); ++s) {
    require(stops[s] >= 0 && stops[s] <= count, "prefix sum stop out of range");
    require(s == 0 || stops[s - 1] <= stops[s], "prefix sum stops must be nondecreasing");
  }
  const i64 chunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<cplx> totals(static_cast<std::size_t>(chunks));
  // partial[s] holds the in-chunk running sum at stop s (relative to its chunk).
  std::vector<cplx> partial(stops.size());
  std::vector<i64> owner(stops.size(), -1);
  for (std::size_t s = 0; s < stops.size(); ++s) {
    if (stops[s] > 0) owner[s] = (stops[s] - 1) / kChunkSize;
  }
  for_each_chunk(chunks, threads, [&](i64 k) {
    const i64 lo = k * kChunkSize, hi = std::min(count, lo + kChunkSize);
    auto s = static_cast<std::size_t>(std::lower_bound(owner.begin(), owner.end(), k) - owner.begin());
    CompensatedComplexSum run;
    for (i64 i = lo; i < hi; ++i) {
      run.add(term(i));
      for (; s < stops.size() && owner[s] == k && stops[s] == i + 1; ++s) partial[s] = run.value();
    }
    totals[static_cast<std::size_t>(k)] = run.value();
  });
  std::vector<cplx> out(stops.size(), cplx{0.0, 0.0});
  CompensatedComplexSum before;
  std::size_t s = 0;
  while (s < stops.size() && owner[s] < 0) ++s;
  for (i64 k = 0; k < chunks; ++k) {
    for (; s < stops.size() && owner[s] == k; ++s) {
      CompensatedComplexSum at = before;
      at.add(partial[s]);
      out[s] = at.value();
    }
    before.add(totals[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// sum_{i in [first, last]} fn(i), reduced as in ordered_prefix_sums.
template <typename Fn>
cplx chunked_sum(i64 first, i64 last, int threads, Fn&& fn) {
  if (last < first) return {0.0, 0.0};
  const i64 count = last - first + 1;
  const i64 stop[] = {count};
  return ordered_prefix_sums(count, stop, threads, [&](i64 i) { return cplx(fn(first + i)); })[0];
}

}  // namespace kloos
