#pragma once

// Sign patterns, runs and partial-sum discrepancy of +-1 functions.

#include <cstdint>
#include <vector>

#include "mflab/correl.hpp"

namespace mflab {

/// Values in {-1, +1}, length >= 1.
struct SignPattern {
  std::vector<int> values;

  static SignPattern from_string(const std::string& s);  // e.g. "++-+"
  std::string str() const;
  std::size_t length() const noexcept { return values.size(); }
};

/// Ascending n in [lo, hi] with f(n+1..n+l) = pattern. Requires hi + l <= table.limit().
std::vector<std::uint64_t> find_pattern(const FunctionSpec& f, const SignPattern& pattern,
                                        std::uint64_t lo, std::uint64_t hi, const SpfTable& table);

/// Density of {n : f(n+1..n+l) = pattern} in the chosen mode at scale x.
DensityEstimate pattern_density(const FunctionSpec& f, const SignPattern& pattern, std::uint64_t x,
                                AverageMode mode, const SpfTable& table);

/// Densities of all 2^l patterns of length l, indexed by the binary word
/// with bit (l-1-i) set when value i is -1.
std::vector<DensityEstimate> pattern_census(const FunctionSpec& f, std::size_t l, std::uint64_t x,
                                            AverageMode mode, const SpfTable& table);

struct RunResult {
  std::uint64_t length = 0;
  std::uint64_t witness = 0;  // first n starting a longest run; 0 when length = 0
};

/// Longest run of `value` in f(1..x).
RunResult max_run_length(const FunctionSpec& f, int value, std::uint64_t x, const SpfTable& table);

struct DiscrepancyLevel {
  std::int64_t M;
  std::uint64_t count;  // #{n <= x : |S(n)| >= M}
  DensityEstimate cesaro;
  DensityEstimate log;
};

struct DiscrepancyProfile {
  std::uint64_t x = 0;
  std::vector<std::int64_t> partial_sums;  // S(1..x)
  std::int64_t max_abs = 0;
  std::uint64_t argmax = 0;  // first n with |S(n)| = max_abs
  std::vector<DiscrepancyLevel> levels;
};

DiscrepancyProfile discrepancy_profile(const FunctionSpec& f, const std::vector<std::int64_t>& M_list,
                                       std::uint64_t x, const SpfTable& table);

}  // namespace mflab
