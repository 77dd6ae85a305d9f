#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace balance_nets {

  // Worker count: BALANCE_NETS_THREADS when set to a positive integer,
  // otherwise the hardware concurrency (at least 1).
  inline std::size_t worker_count() {
    if (char const* env = std::getenv("BALANCE_NETS_THREADS")) {
      try {
        long const v = std::stol(env);
        if (v > 0) {
          return static_cast<std::size_t>(v);
        }
      } catch (std::exception const&) {
      }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }

  // Calls f(k) for k in [0, n) on up to `workers` threads, in contiguous
  // chunks. The first exception thrown by any call is rethrown.
  template <typename F>
  void parallel_for(std::size_t n, std::size_t workers, F&& f) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
      for (std::size_t k = 0; k < n; ++k) {
        f(k);
      }
      return;
    }
    std::exception_ptr       error;
    std::mutex               error_mutex;
    std::vector<std::thread> pool;
    std::size_t const        chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      std::size_t const lo = w * chunk, hi = std::min(n, lo + chunk);
      pool.emplace_back([&, lo, hi] {
        try {
          for (std::size_t k = lo; k < hi; ++k) {
            f(k);
          }
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
    if (error) {
      std::rethrow_exception(error);
    }
  }

}  // namespace balance_nets
