#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "mflab/correl.hpp"

using namespace mflab;

namespace {

const SpfTable& table() {
  static const SpfTable t = build_spf_sieve(2'100'000);
  return t;
}

// Liouville by an independent Omega sieve (repeated division by each prime).
const std::vector<int>& lambda_oracle() {
  static const std::vector<int> v = [] {
    const std::size_t N = 2'100'000;
    std::vector<std::uint32_t> rest(N + 1);
    std::vector<int> omega(N + 1, 0);
    for (std::size_t n = 0; n <= N; ++n) rest[n] = static_cast<std::uint32_t>(n);
    for (std::size_t p = 2; p <= N; ++p) {
      if (rest[p] != p || omega[p] != 0) continue;  // p prime iff untouched
      for (std::size_t m = p; m <= N; m += p) {
        while (rest[m] % p == 0) {
          rest[m] /= static_cast<std::uint32_t>(p);
          ++omega[m];
        }
      }
    }
    std::vector<int> out(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) out[n] = (omega[n] % 2) ? -1 : 1;
    return out;
  }();
  return v;
}

CorrelationSpec lambda_spec(std::vector<std::uint64_t> shifts, AverageMode mode, std::uint64_t x) {
  CorrelationSpec s;
  for (auto h : shifts) s.factors.push_back({FunctionSpec::liouville(), 1, h, 1});
  s.mode = mode;
  s.x = x;
  return s;
}

}  // namespace

TEST_CASE("window starts and weights") {
  CHECK(default_window_start(AverageMode::cesaro, 1'000'000) == 1);
  CHECK(default_window_start(AverageMode::log, 1'000'000) == 1000);
  CHECK(default_window_start(AverageMode::log, 1'000'001) == 1001);
  CHECK(default_window_start(AverageMode::loglog, 10) == 3);
  const double x = 1e6;
  CHECK(default_window_start(AverageMode::loglog, 1'000'000) ==
        static_cast<std::uint64_t>(std::ceil(std::pow(x, 1.0 / std::log(std::log(x))))));
  CHECK(mode_weight(AverageMode::loglog, 10) == doctest::Approx(1.0 / (10 * std::log(10.0))));
  CHECK(mode_from_name("log") == AverageMode::log);
  CHECK_THROWS_AS(mode_from_name("harmonic"), InvalidArgument);
}

TEST_CASE("constant function averages to one") {
  const auto& t = table();
  for (auto mode : {AverageMode::cesaro, AverageMode::log, AverageMode::loglog}) {
    CorrelationSpec s;
    s.factors = {{FunctionSpec::one(), 1, 0, 1}, {FunctionSpec::one(), 2, 5, 3}};
    s.mode = mode;
    s.x = 1'000'000;
    CHECK(correlation(s, t).value == cplx(1.0, 0.0));
  }
}

TEST_CASE("liouville correlations against an independent oracle") {
  const auto& t = table();
  const auto& lam = lambda_oracle();
  const std::uint64_t x = 1'000'000;
  for (auto mode : {AverageMode::cesaro, AverageMode::log, AverageMode::loglog}) {
    const auto r2 = correlation(lambda_spec({0, 1}, mode, x), t);
    const auto r4 = correlation(lambda_spec({0, 1, 2, 3}, mode, x), t);
    double s2 = 0, s4 = 0, w = 0;
    for (std::uint64_t n = r2.lo; n <= x; ++n) {
      const double wt = mode_weight(mode, n);
      s2 += wt * lam[n] * lam[n + 1];
      s4 += wt * lam[n] * lam[n + 1] * lam[n + 2] * lam[n + 3];
      w += wt;
    }
    CAPTURE(mode_name(mode));
    CHECK(r2.value.real() == doctest::Approx(s2 / w).epsilon(1e-9));
    CHECK(r4.value.real() == doctest::Approx(s4 / w).epsilon(1e-9));
    CHECK(r2.value.imag() == 0.0);
    CHECK(std::abs(r2.value.real()) <= 0.01);
    CHECK(std::abs(r4.value.real()) <= 0.55);
  }
  // frozen Cesaro values at x = 10^6
  CHECK(correlation(lambda_spec({0, 1}, AverageMode::cesaro, x), t).value.real() ==
        doctest::Approx(-0.001108).epsilon(1e-6));
}

TEST_CASE("parallel matches the serial reference exactly") {
  const auto& t = table();
  std::vector<CorrelationSpec> specs;
  specs.push_back(lambda_spec({0, 1, 5}, AverageMode::log, 200'000));
  CorrelationSpec c;
  c.factors = {{FunctionSpec::twist(0.7), 1, 0, 1}, {FunctionSpec::conjugate(FunctionSpec::twist(0.7)), 2, 3, 2}};
  c.mode = AverageMode::loglog;
  c.x = 100'000;
  specs.push_back(c);
  CorrelationSpec m;
  m.factors = {{FunctionSpec::moebius(), 3, 1, 1}, {FunctionSpec::character(real_primitive_character(5)), 1, 2, 1}};
  m.x = 300'000;
  specs.push_back(m);
  for (const auto& s : specs) {
    const auto a = correlation(s, t);
    const auto b = reference::correlation(s, t);
    // integer kinds agree bit for bit; complex values differ in rounding order
    const bool integer = std::all_of(s.factors.begin(), s.factors.end(),
                                     [](const CorrelationFactor& f) { return f.f.integer_valued(); });
    if (integer) CHECK(a.value == b.value);
    CHECK(std::abs(a.value - b.value) <= 1e-12);
    CHECK(a.total_weight == b.total_weight);
  }
}

TEST_CASE("scan is bit-identical to single-shot evaluation") {
  const auto& t = table();
  const auto xs = geometric_grid(1000, 1'000'000, 2.0);
  CHECK(xs.front() == 1000);
  CHECK(xs.back() == 1'000'000);
  for (auto mode : {AverageMode::cesaro, AverageMode::log, AverageMode::loglog}) {
    auto s = lambda_spec({0, 1, 2}, mode, 0);
    const auto scan = correlation_scan(s, xs, t);
    REQUIRE(scan.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s.x = xs[i];
      const auto single = correlation(s, t);
      CHECK(scan[i].value == single.value);
      CHECK(scan[i].lo == single.lo);
    }
  }
}

TEST_CASE("degenerate configurations are annotated") {
  const auto& t = table();
  auto s = lambda_spec({3, 3}, AverageMode::cesaro, 1000);
  s.nondegenerate = true;
  const auto r = correlation(s, t);
  CHECK(r.degenerate);
  CHECK(!r.annotation.empty());
  CHECK(r.value.real() == 1.0);  // lambda^2 = 1
  CorrelationSpec d;
  d.factors = {{FunctionSpec::liouville(), 2, 2, 1}, {FunctionSpec::liouville(), 1, 1, 1}};
  CHECK(is_degenerate(d.factors));
  CHECK(!is_degenerate(lambda_spec({0, 1}, AverageMode::cesaro, 1).factors));
}

TEST_CASE("range validation") {
  const auto& t = table();
  CHECK_THROWS_AS(correlation(lambda_spec({0, 1}, AverageMode::cesaro, t.limit()), t), InvalidArgument);
  CHECK_THROWS_AS(correlation(lambda_spec({}, AverageMode::cesaro, 10), t), InvalidArgument);
  auto s = lambda_spec({0, 1}, AverageMode::cesaro, 100);
  s.start = 200;
  CHECK_THROWS_AS(correlation(s, t), InvalidArgument);
}

TEST_CASE("shift invariance of Cesaro averages") {
  const auto& t = table();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t h1 = rng() % 50, gap = 1 + rng() % 50, x = 100'000 + rng() % 500'000;
    const auto a = correlation(lambda_spec({h1, h1 + gap}, AverageMode::cesaro, x), t).value.real();
    const auto b = correlation(lambda_spec({0, gap}, AverageMode::cesaro, x), t).value.real();
    REQUIRE(std::abs(a - b) <= 2.0 * static_cast<double>(h1) / static_cast<double>(x) + 1e-15);
  }
}

TEST_CASE("densities") {
  const std::uint64_t N = 1'000'000;
  std::vector<std::uint8_t> evens(N), threes(N);
  for (std::uint64_t n = 1; n <= N; ++n) {
    evens[n - 1] = n % 2 == 0;
    threes[n - 1] = n % 3 == 0;
  }
  CHECK(density(evens, AverageMode::cesaro, N).value == 0.5);
  for (auto mode : {AverageMode::log, AverageMode::loglog}) {
    CHECK(std::abs(density(evens, mode, N).value - 0.5) <= 1e-3);
    CHECK(std::abs(density(threes, mode, N).value - 1.0 / 3.0) <= 1e-3);
  }
  const Indicator ev = [](std::uint64_t n) { return n % 2 == 0; };
  CHECK(density(ev, AverageMode::log, N).value == density(evens, AverageMode::log, N).value);
  const auto series = density_series(threes, AverageMode::log, geometric_grid(1000, N, 10.0));
  REQUIRE(series.size() == 4);
  for (const auto& p : series) {
    CHECK(p.running_inf <= p.estimate.value);
    CHECK(p.running_sup >= p.estimate.value);
  }
  CHECK_THROWS_AS(density(evens, AverageMode::cesaro, N + 1), InvalidArgument);
}

TEST_CASE("decoupling discrepancy") {
  const auto& t = table();
  const auto one = FunctionSpec::one();
  CHECK(decoupling_discrepancy(one, one, 0, 1, 50, 100'000, t) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(decoupling_discrepancy(one, one, 1, 1, 50, 1000, t), InvalidArgument);
  // direct oracle for lambda with the independent sieve
  const auto& lam = lambda_oracle();
  const std::uint64_t x = 100'000, P = 30, h1 = 0, h2 = 1;
  double num = 0, den = 0;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}) {
    double a = 0, b = 0;
    for (std::uint64_t n = 1; n <= x; ++n) a += lam[n + p * h1] * lam[n + p * h2];
    for (std::uint64_t n = 1; n <= x / p; ++n) b += lam[p * (n + h1)] * lam[p * (n + h2)];
    num += std::abs(a / x - b / static_cast<double>(x / p)) / p;
    den += 1.0 / p;
  }
  const auto L = FunctionSpec::liouville();
  CHECK(decoupling_discrepancy(L, L, h1, h2, P, x, t) == doctest::Approx(num / den).epsilon(1e-9));
}

TEST_CASE("segmented window correlation matches the sieve") {
  const auto& t = table();
  const SegmentedFactorizer fz(2'000'000);
  const std::vector<CorrelationFactor> fs{{FunctionSpec::twist(1.3), 1, 0, 1},
                                          {FunctionSpec::conjugate(FunctionSpec::twist(1.3)), 1, 1, 1}};
  CorrelationSpec s;
  s.factors = fs;
  s.x = 1'500'000;
  s.start = 1'000'000;
  const cplx a = window_correlation(fs, 1'000'000, 1'500'000, fz);
  const cplx b = correlation(s, t).value;
  CHECK(std::abs(a - b) <= 1e-12);
}
