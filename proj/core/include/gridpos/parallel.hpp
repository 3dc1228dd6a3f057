#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gridpos {

// Splits [0, total) into contiguous chunks and evaluates body(begin, end) on
// up to `workers` threads. Partials come back in chunk order, so any merge
// that is associative and order-preserving is independent of `workers`.
template <class Partial, class Body>
std::vector<Partial> run_chunked(unsigned workers, std::uint64_t total, Body&& body) {
  workers = std::max(1U, workers);
  const std::uint64_t chunks = total == 0 ? 0 : std::min<std::uint64_t>(total, std::uint64_t{workers} * 8);
  std::vector<Partial> partials(chunks);
  if (chunks == 0) return partials;

  auto bounds = [&](std::uint64_t c) { return total / chunks * c + std::min(c, total % chunks); };
  if (workers == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) partials[c] = body(bounds(c), bounds(c + 1));
    return partials;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    for (unsigned w = 0; w < used; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
          try {
            partials[c] = body(bounds(c), bounds(c + 1));
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return partials;
}

}  // namespace gridpos
