#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace orbital {

/// Splits [0, n) into contiguous chunks, runs fn(begin, end) for each on up to
/// `threads` workers, and returns the results in chunk order. The chunking
/// depends only on n and threads, so ordered reductions over the result are
/// scheduler-independent. The first exception thrown by a worker is rethrown.
template <typename Fn>
auto parallel_map_chunks(std::size_t n, int threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}, std::size_t{}));
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                                                     n / 1024 + 1));
  std::vector<Result> out(workers);
  if (workers == 1) {
    out[0] = fn(std::size_t{0}, n);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = n * w / workers;
    const std::size_t e = n * (w + 1) / workers;
    pool.emplace_back([&, w, b, e] {
      try {
        out[w] = fn(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace orbital
