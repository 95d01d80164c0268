#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mflab/patterns.hpp"

using namespace mflab;

namespace {

const SpfTable& table() {
  static const SpfTable t = build_spf_sieve(1'000'100);
  return t;
}

const auto f3p = FunctionSpec::modified_legendre(3, 1);
const auto f3m = FunctionSpec::modified_legendre(3, -1);

// lambda(1..N) by trial division
const std::vector<int>& lambda_oracle() {
  static const std::vector<int> v = [] {
    const std::uint64_t N = 1'000'000;
    std::vector<int> out(N + 1, 0);
    for (std::uint64_t n = 1; n <= N; ++n) {
      int omega = 0;
      std::uint64_t m = n;
      for (std::uint64_t d = 2; d * d <= m; ++d) {
        while (m % d == 0) {
          m /= d;
          ++omega;
        }
      }
      if (m > 1) ++omega;
      out[n] = omega % 2 ? -1 : 1;
    }
    return out;
  }();
  return v;
}

std::vector<int> values(const FunctionSpec& f, std::uint64_t lo, std::size_t count) {
  std::vector<int> out;
  for (std::uint64_t n = lo; n < lo + count; ++n) out.push_back(evaluate_int(f, n, table()));
  return out;
}

}  // namespace

TEST_CASE("sign pattern parsing") {
  CHECK(SignPattern::from_string("++-+").values == std::vector<int>{1, 1, -1, 1});
  CHECK(SignPattern::from_string("+-").str() == "+-");
  CHECK_THROWS_AS(SignPattern::from_string(""), InvalidArgument);
  CHECK_THROWS_AS(SignPattern::from_string("+0"), InvalidArgument);
}

TEST_CASE("find_pattern examples") {
  const auto& t = table();
  const auto pat = SignPattern::from_string("++-+");
  const auto hits = find_pattern(f3p, pat, 1, 100, t);
  CHECK(std::find(hits.begin(), hits.end(), 8) != hits.end());
  CHECK(find_pattern(FunctionSpec::one(), SignPattern::from_string("-"), 1, 1000, t).empty());
  const auto m = find_pattern(f3m, pat, 5, 5, t);
  CHECK(m == std::vector<std::uint64_t>{5});
  // every reported index re-evaluates to the pattern
  for (std::uint64_t n : find_pattern(FunctionSpec::liouville(), pat, 1, 100'000, t)) {
    REQUIRE(values(FunctionSpec::liouville(), n + 1, 4) == pat.values);
  }
  CHECK_THROWS_AS(find_pattern(FunctionSpec::liouville(), pat, 1, t.limit(), t), InvalidArgument);
}

TEST_CASE("f_3 patterns along progressions, exhaustive below 10^5") {
  const auto& t = table();
  const auto pp = find_pattern(f3p, SignPattern::from_string("++-+"), 1, 100'000, t);
  const auto pm = find_pattern(f3m, SignPattern::from_string("++--"), 1, 100'000, t);
  const auto qp = find_pattern(f3p, SignPattern::from_string("++--"), 1, 100'000, t);
  const auto qm = find_pattern(f3m, SignPattern::from_string("++-+"), 1, 100'000, t);
  auto has = [](const std::vector<std::uint64_t>& v, std::uint64_t n) { return std::binary_search(v.begin(), v.end(), n); };
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    // patterns at positions n..n+3 start at index n - 1 in the n+1 convention
    if (n % 27 == 9) {
      REQUIRE(has(pp, n - 1));
      REQUIRE(has(pm, n - 1));
    }
    if (n % 9 == 3) REQUIRE(has(qp, n - 1));
    // the proof covers n = 3(3m+2) with 3 | m, i.e. n = 6 mod 27
    if (n % 27 == 6) REQUIRE(has(qm, n - 1));
  }
  // n = 6 mod 9 alone is not enough: f_3^-(24..27) = (+1,+1,-1,-1)
  CHECK(!has(qm, 23));
  CHECK(values(f3m, 24, 4) == std::vector<int>{1, 1, -1, -1});
}

TEST_CASE("pattern densities") {
  const auto& t = table();
  const auto census = pattern_census(FunctionSpec::liouville(), 4, 1'000'000, AverageMode::cesaro, t);
  REQUIRE(census.size() == 16);
  double total = 0.0;
  for (const auto& d : census) {
    CHECK(d.value >= 0.02);
    total += d.value;
  }
  CHECK(std::abs(total - 1.0) <= 4.0 / 1e6);
  // census entry matches a direct count
  const auto& lam = lambda_oracle();
  std::uint64_t cnt = 0;
  for (std::uint64_t n = 1; n <= 999'990; ++n) cnt += lam[n + 1] == 1 && lam[n + 2] == -1 && lam[n + 3] == 1 && lam[n + 4] == 1;
  const auto d = pattern_density(FunctionSpec::liouville(), SignPattern::from_string("+-++"), 999'990, AverageMode::cesaro, t);
  CHECK(d.value == static_cast<double>(cnt) / 999'990.0);
  CHECK(census[0b0100].value == pattern_density(FunctionSpec::liouville(), SignPattern::from_string("+-++"), 1'000'000,
                                                AverageMode::cesaro, t).value);
  CHECK(pattern_density(FunctionSpec::one(), SignPattern::from_string("+"), 1000, AverageMode::cesaro, t).value == 1.0);
  for (std::uint64_t x : {10'000, 100'000, 1'000'000}) {
    CHECK(pattern_density(f3p, SignPattern::from_string("+++"), x, AverageMode::cesaro, t).value == 0.0);
    CHECK(pattern_density(f3m, SignPattern::from_string("+++"), x, AverageMode::log, t).value == 0.0);
  }
}

TEST_CASE("run lengths") {
  const auto& t = table();
  for (std::uint64_t x : {10, 1000, 1'000'000}) {
    CHECK(max_run_length(f3p, 1, x, t).length == 2);
    CHECK(max_run_length(f3m, 1, x, t).length == 2);
    CHECK(max_run_length(FunctionSpec::hudson_g(3), 1, x, t).length == 3);
    CHECK(max_run_length(FunctionSpec::one(), 1, x, t).length == x);
  }
  CHECK(max_run_length(FunctionSpec::hudson_g(3), 1, 10, t).witness == 3);  // g_3(3..5) = +1
  CHECK(max_run_length(FunctionSpec::one(), -1, 100, t).length == 0);
}

TEST_CASE("schur consequence over small moduli") {
  const auto& t = table();
  const auto pat = SignPattern::from_string("+++");
  CHECK(find_pattern(f3p, pat, 1, 999'000, t).empty());
  CHECK(find_pattern(f3m, pat, 1, 999'000, t).empty());
  const auto ref_p = values(f3p, 1, 200);
  const auto ref_m = values(f3m, 1, 200);
  int tested = 0;
  for (std::uint64_t q = 1; q <= 8; ++q) {
    for (const auto& chi : real_characters_mod(q)) {
      std::vector<std::uint64_t> bad;
      for (std::uint64_t p : {2, 3, 5, 7}) {
        if (q % p == 0) bad.push_back(p);
      }
      for (unsigned mask = 0; mask < (1u << bad.size()); ++mask) {
        std::map<std::uint64_t, int> ov;
        for (std::size_t i = 0; i < bad.size(); ++i) ov[bad[i]] = (mask >> i) & 1 ? -1 : 1;
        const auto f = FunctionSpec::modified_character(chi, ov);
        const auto v = values(f, 1, 200);
        if (v == ref_p || v == ref_m) continue;
        CAPTURE(f.describe());
        CHECK(!find_pattern(f, pat, 1, 999'000, t).empty());
        ++tested;
      }
    }
  }
  CHECK(tested > 20);
}

TEST_CASE("discrepancy profile") {
  const auto& t = table();
  const auto small = discrepancy_profile(FunctionSpec::liouville(), {1}, 9, t);
  CHECK(small.partial_sums.back() == -1);
  const auto one = discrepancy_profile(FunctionSpec::one(), {3}, 1000, t);
  CHECK(one.levels[0].count == 998);
  CHECK(one.levels[0].log.value == 1.0);

  const std::uint64_t x = 1'000'000;
  const auto prof = discrepancy_profile(FunctionSpec::liouville(), {1, 5}, x, t);
  const auto& lam = lambda_oracle();
  std::int64_t s = 0, mx = 0;
  double wx = 0.0, w = 0.0;
  const std::uint64_t lo = default_window_start(AverageMode::log, x);
  for (std::uint64_t n = 1; n <= x; ++n) {
    s += lam[n];
    REQUIRE(prof.partial_sums[n - 1] == s);
    mx = std::max<std::int64_t>(mx, std::llabs(s));
    if (n >= lo) {
      w += 1.0 / static_cast<double>(n);
      if (std::llabs(s) >= 1) wx += 1.0 / static_cast<double>(n);
    }
  }
  CHECK(prof.max_abs == mx);
  CHECK(prof.max_abs == 1253);
  CHECK(prof.max_abs >= 5);
  CHECK(prof.levels[0].log.value == doctest::Approx(wx / w).epsilon(1e-12));
  CHECK(prof.levels[0].log.value > 0.3);
  CHECK(prof.levels[1].count <= prof.levels[0].count);
}
