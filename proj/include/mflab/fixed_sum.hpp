#pragma once

// Exact fixed-point accumulation. Every term is rounded once to a multiple of
// 2^-64 and summed in a 128-bit integer, so the total does not depend on the
// order or grouping of the additions (and hence not on the thread count).

#include <cmath>
#include <cstdint>
#include <vector>

#include <omp.h>

namespace mflab {

struct FixedSum {
  __int128 acc = 0;

  /// round(x * 2^64); |x| must stay below 2^62.
  static __int128 to_fixed(double x) {
    return static_cast<__int128>(std::nearbyint(std::ldexp(x, 64)));
  }

  void add(double x) { acc += to_fixed(x); }
  void add_int(std::int64_t k) { acc += static_cast<__int128>(k) << 64; }
  double value() const { return static_cast<double>(std::ldexp(static_cast<long double>(acc), -64)); }

  FixedSum& operator+=(const FixedSum& o) {
    acc += o.acc;
    return *this;
  }
  friend FixedSum operator-(FixedSum a, const FixedSum& b) {
    a.acc -= b.acc;
    return a;
  }
  friend bool operator==(const FixedSum&, const FixedSum&) = default;
};

/// Runs body(n, acc) for n in [lo, hi] over OpenMP threads and merges the
/// per-thread accumulators. Acc must be default constructible with an exact
/// (associative) operator+=.
template <typename Acc, typename Body>
Acc parallel_accumulate(std::uint64_t lo, std::uint64_t hi, Body&& body) {
  if (lo > hi) return Acc{};
  const auto n = static_cast<std::int64_t>(hi - lo + 1);
  std::vector<Acc> part(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    Acc local{};
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(lo + static_cast<std::uint64_t>(i), local);
    part[static_cast<std::size_t>(omp_get_thread_num())] = local;
  }
  Acc total{};
  for (const auto& p : part) total += p;
  return total;
}

/// Serial counterpart of parallel_accumulate.
template <typename Acc, typename Body>
Acc serial_accumulate(std::uint64_t lo, std::uint64_t hi, Body&& body) {
  Acc total{};
  for (std::uint64_t n = lo; n <= hi && n >= lo; ++n) body(n, total);
  return total;
}

}  // namespace mflab
