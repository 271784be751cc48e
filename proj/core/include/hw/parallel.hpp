#pragma once

// Fixed-block parallel map and compensated summation.
//
// Work is cut into blocks whose boundaries depend only on the problem size,
// never on the worker count, and block results are merged in index order.
// That makes every reduction bitwise identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hw {

/// Process-wide worker count used by the parallel helpers (>= 1).
int worker_count();
void set_worker_count(int n);

/// Neumaier-compensated accumulator.
template <class T>
struct CompensatedSum {
  T sum = 0;
  T comp = 0;

  void add(T v) {
    const T t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }
  T value() const { return sum + comp; }
};

struct ComplexSum {
  CompensatedSum<long double> re, im;
  void add(std::complex<long double> v) {
    re.add(v.real());
    im.add(v.imag());
  }
  void add(const ComplexSum& o) {
    re.add(o.re);
    im.add(o.im);
  }
  std::complex<long double> value() const { return {re.value(), im.value()}; }
};

/// Runs fn(b) for b in [0, blocks) on up to worker_count() threads and
/// returns the results in block order.
template <class R, class Fn>
std::vector<R> parallel_blocks(std::size_t blocks, Fn&& fn) {
  std::vector<R> out(blocks);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) out[b] = fn(b);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        out[b] = fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(blocks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

/// Splits [lo, hi] into consecutive ranges of `block` integers.
struct BlockRange {
  long long lo = 0;
  long long hi = -1;  // inclusive
};

inline std::vector<BlockRange> split_range(long long lo, long long hi, long long block) {
  std::vector<BlockRange> out;
  if (hi < lo) return out;
  for (long long a = lo; a <= hi; a += block) out.push_back({a, std::min(hi, a + block - 1)});
  return out;
}

}  // namespace hw
