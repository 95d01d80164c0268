#include "mflab/patterns.hpp"

#include <cstdlib>

namespace mflab {

SignPattern SignPattern::from_string(const std::string& s) {
  SignPattern p;
  for (char c : s) {
    if (c == '+') {
      p.values.push_back(1);
    } else if (c == '-') {
      p.values.push_back(-1);
    } else {
      throw InvalidArgument("sign pattern must consist of '+' and '-': " + s);
    }
  }
  require(!p.values.empty(), "sign pattern must be nonempty");
  return p;
}

std::string SignPattern::str() const {
  std::string s;
  for (int v : values) s += v > 0 ? '+' : '-';
  return s;
}

namespace {

void check_pattern(const SignPattern& p) {
  require(p.length() >= 1, "sign pattern must be nonempty");
  for (int v : p.values) require(v == 1 || v == -1, "sign pattern values must be +-1");
}

// f(1..hi) as int8, index n - 1.
std::vector<std::int8_t> values_to(const FunctionSpec& f, std::uint64_t hi, const SpfTable& table) {
  require(f.integer_valued(), "pattern statistics need an integer-valued function");
  require(hi <= table.limit(), "pattern scan: " + std::to_string(hi) + " exceeds sieve limit " +
                                   std::to_string(table.limit()));
  return evaluate_range(f, 1, hi, table).ints();
}

// mask[n - 1] = 1 iff f(n+1..n+l) = pattern, n = 1..x.
std::vector<std::uint8_t> match_mask(const std::vector<std::int8_t>& v, const SignPattern& p,
                                     std::uint64_t x) {
  std::vector<std::uint8_t> mask(x, 0);
  const auto l = static_cast<std::int64_t>(p.length());
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 1; n <= static_cast<std::int64_t>(x); ++n) {
    bool ok = true;
    for (std::int64_t i = 0; i < l && ok; ++i) ok = v[static_cast<std::size_t>(n + i)] == p.values[static_cast<std::size_t>(i)];
    mask[static_cast<std::size_t>(n - 1)] = ok;
  }
  return mask;
}

}  // namespace

std::vector<std::uint64_t> find_pattern(const FunctionSpec& f, const SignPattern& pattern,
                                        std::uint64_t lo, std::uint64_t hi, const SpfTable& table) {
  check_pattern(pattern);
  require(lo >= 1 && lo <= hi, "find_pattern: need 1 <= lo <= hi");
  const auto v = values_to(f, hi + pattern.length(), table);
  const auto mask = match_mask(v, pattern, hi);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (mask[n - 1]) out.push_back(n);
  }
  return out;
}

DensityEstimate pattern_density(const FunctionSpec& f, const SignPattern& pattern, std::uint64_t x,
                                AverageMode mode, const SpfTable& table) {
  check_pattern(pattern);
  require(x >= 1, "pattern_density: x must be >= 1");
  const auto v = values_to(f, x + pattern.length(), table);
  return density(match_mask(v, pattern, x), mode, x);
}

std::vector<DensityEstimate> pattern_census(const FunctionSpec& f, std::size_t l, std::uint64_t x,
                                            AverageMode mode, const SpfTable& table) {
  require(l >= 1 && l <= 20, "pattern_census: need 1 <= l <= 20");
  require(x >= 1, "pattern_census: x must be >= 1");
  const auto v = values_to(f, x + l, table);
  std::vector<DensityEstimate> out;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << l); ++w) {
    SignPattern p;
    for (std::size_t i = 0; i < l; ++i) p.values.push_back((w >> (l - 1 - i)) & 1 ? -1 : 1);
    out.push_back(density(match_mask(v, p, x), mode, x));
  }
  return out;
}

RunResult max_run_length(const FunctionSpec& f, int value, std::uint64_t x, const SpfTable& table) {
  require(value == 1 || value == -1, "max_run_length: value must be +-1");
  const auto v = values_to(f, x, table);
  RunResult best;
  std::uint64_t run = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    run = v[n - 1] == value ? run + 1 : 0;
    if (run > best.length) {
      best.length = run;
      best.witness = n - run + 1;
    }
  }
  return best;
}

DiscrepancyProfile discrepancy_profile(const FunctionSpec& f, const std::vector<std::int64_t>& M_list,
                                       std::uint64_t x, const SpfTable& table) {
  require(x >= 1, "discrepancy_profile: x must be >= 1");
  const auto v = values_to(f, x, table);
  DiscrepancyProfile prof;
  prof.x = x;
  prof.partial_sums.resize(x);
  std::int64_t s = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    require(v[n - 1] == 1 || v[n - 1] == -1, "discrepancy_profile: f must be +-1-valued");
    s += v[n - 1];
    prof.partial_sums[n - 1] = s;
    if (std::llabs(s) > prof.max_abs) {
      prof.max_abs = std::llabs(s);
      prof.argmax = n;
    }
  }
  for (std::int64_t M : M_list) {
    std::vector<std::uint8_t> mask(x);
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
      mask[n - 1] = std::llabs(prof.partial_sums[n - 1]) >= M;
      count += mask[n - 1];
    }
    prof.levels.push_back({M, count, density(mask, AverageMode::cesaro, x), density(mask, AverageMode::log, x)});
  }
  return prof;
}

}  // namespace mflab
