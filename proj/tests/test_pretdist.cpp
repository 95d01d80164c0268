#include "doctest.h"

#include <cmath>
#include <random>

#include "mflab/pretdist.hpp"

using namespace mflab;

namespace {

const SpfTable& table() {
  static const SpfTable t = build_spf_sieve(1'000'000);
  return t;
}

bool prime_brute(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FunctionSpec random_kind(std::mt19937_64& rng) {
  const std::uint64_t lim = table().limit();
  switch (rng() % 10) {
    case 0:
      return FunctionSpec::one();
    case 1:
      return FunctionSpec::liouville();
    case 2:
      return FunctionSpec::moebius();
    case 3:
      return FunctionSpec::liouville_like(PrimeSet::every_kth(1 + rng() % 10, lim), true);
    case 4:
      return FunctionSpec::character(real_primitive_character(std::vector<std::uint64_t>{3, 4, 5, 7, 11, 12}[rng() % 6]));
    case 5:
      return FunctionSpec::modified_legendre(std::vector<std::uint64_t>{5, 7, 11, 13, 53}[rng() % 5],
                                             rng() % 2 ? 1 : -1);
    case 6:
      return FunctionSpec::twist(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    case 7:
      return FunctionSpec::hudson_g(1 + static_cast<int>(rng() % 3));
    case 8:
      return FunctionSpec::conjugate(FunctionSpec::twist(std::uniform_real_distribution<double>(-1.0, 1.0)(rng)));
    default:
      return FunctionSpec::product({FunctionSpec::liouville(), FunctionSpec::twist(0.5)});
  }
}

}  // namespace

TEST_CASE("distance examples") {
  const auto& t = table();
  for (const auto& f : {FunctionSpec::liouville(), FunctionSpec::hudson_g(2), FunctionSpec::modified_legendre(7, 1)}) {
    CHECK(distance({f, f, 2, 100'000}, t) == 0.0);
  }
  // unit-modulus complex values: 1 - |z|^2 is zero up to rounding
  CHECK(distance_squared({FunctionSpec::twist(1.7), FunctionSpec::twist(1.7), 2, 100'000}, t) <= 1e-14);
  // a character vanishes at primes dividing its modulus, so D(chi_4, chi_4)^2 = 1/2 from p = 2
  const auto c4 = FunctionSpec::character(real_primitive_character(4));
  CHECK(distance_squared({c4, c4, 2, 100'000}, t) == 0.5);
  CHECK(distance_squared({c4, c4, 3, 100'000}, t) == 0.0);
  double oracle = 0.0;
  int count = 0;
  for (std::uint64_t p = 2; p <= 100; ++p) {
    if (!prime_brute(p)) continue;
    oracle += 1.0 / static_cast<double>(p);
    ++count;
  }
  CHECK(count == 25);
  CHECK(distance({FunctionSpec::liouville(), FunctionSpec::one(), 2, 100}, t) ==
        doctest::Approx(std::sqrt(2.0 * oracle)).epsilon(1e-14));
  const auto chi = FunctionSpec::character(real_primitive_character(5));
  // single term at y = x = 13: chi_5(13) = chi_5(3) = -1
  CHECK(distance_squared({chi, FunctionSpec::one(), 13, 13}, t) == doctest::Approx(2.0 / 13.0));
  CHECK(distance_squared({chi, FunctionSpec::one(), 14, 16}, t) == 0.0);
  CHECK_THROWS_AS(distance({chi, chi, 2, t.limit() + 1}, t), InvalidArgument);
  CHECK_THROWS_AS(distance({chi, chi, 20, 10}, t), InvalidArgument);
}

TEST_CASE("twist distance profile") {
  const auto& t = table();
  const auto zero = twist_distance_profile(0.0, 1'000'000, t);
  CHECK(zero.measured == 0.0);
  CHECK(zero.predicted == 0.0);
  for (double u : {0.25, 0.5, 1.0}) {
    const auto r = twist_distance_profile(u, 1'000'000, t);
    // direct oracle over primes by trial division
    double direct = 0.0;
    for (std::uint32_t p : t.primes()) direct += (1.0 - std::cos(u * std::log(static_cast<double>(p)))) / p;
    CHECK(r.measured == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::abs(r.measured - r.predicted) <= 3.0);
  }
  CHECK(twist_distance_profile(1.0, 1'000'000, t).predicted == doctest::Approx(2.6957).epsilon(1e-4));
  CHECK_THROWS_AS(twist_distance_profile(1.5, 1000, t), InvalidArgument);
}

TEST_CASE("distance properties on random triples") {
  const auto& t = table();
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> xs(100, 1'000'000);
  for (int i = 0; i < 100; ++i) {
    const auto f1 = random_kind(rng);
    const auto f2 = random_kind(rng);
    const auto f3 = random_kind(rng);
    const auto g1 = random_kind(rng);
    const auto g2 = random_kind(rng);
    std::uint64_t x = xs(rng);
    std::uint64_t y = 2 + rng() % 50;
    CAPTURE(f1.describe());
    CAPTURE(f2.describe());
    CAPTURE(f3.describe());
    const double d12 = distance({f1, f2, y, x}, t);
    const double d23 = distance({f2, f3, y, x}, t);
    const double d13 = distance({f1, f3, y, x}, t);
    REQUIRE(d13 <= d12 + d23 + 1e-12);
    REQUIRE(std::abs(d12 - distance({f2, f1, y, x}, t)) <= 1e-12);
    const double prod = distance({FunctionSpec::product({f1, f2}), FunctionSpec::product({g1, g2}), y, x}, t);
    REQUIRE(prod <= distance({f1, g1, y, x}, t) + distance({f2, g2, y, x}, t) + 1e-12);
    // additivity at a split point and monotonicity in x
    const std::uint64_t split = y + (x - y) / 2;
    const double whole = distance_squared({f1, f2, 2, x}, t);
    const double left = distance_squared({f1, f2, 2, split}, t);
    const double right = distance_squared({f1, f2, split + 1, x}, t);
    REQUIRE(std::abs(whole - left - right) <= 1e-10);
    REQUIRE(left <= whole + 1e-15);
  }
}

TEST_CASE("twist scan examples") {
  const auto& t = table();
  TwistScanOptions opt;
  opt.q_max = 5;
  opt.t_cap = 10.0;
  opt.t_step = 0.01;

  const auto chi4 = FunctionSpec::character(real_primitive_character(4));
  auto r = min_distance_over_twists(chi4, 10'000, opt, t);
  CHECK(r.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(std::abs(r.best_t) <= opt.t_step / 2);
  CHECK(r.best_character.conductor() == 4);
  CHECK(r.T == 10.0);
  CHECK(r.grid_points == 2001);

  r = min_distance_over_twists(FunctionSpec::twist(2.0), 10'000, opt, t);
  CHECK(std::abs(r.best_t - 2.0) <= opt.t_step);
  CHECK(r.value <= 1e-6);
  CHECK(r.best_character.principal());

  // liouville: exhaustive grid oracle via the plain distance function
  const auto lam = FunctionSpec::liouville();
  r = min_distance_over_twists(lam, 10'000, opt, t);
  double oracle = 1e300;
  for (std::uint64_t q = 1; q <= 5; ++q) {
    for (const auto& chi : real_characters_mod(q)) {
      for (int j = 0; j <= 2000; ++j) {
        const double tt = -10.0 + j * 0.01;
        const auto g = FunctionSpec::product({FunctionSpec::character(chi), FunctionSpec::twist(tt)});
        oracle = std::min(oracle, distance({lam, g, 2, 10'000}, t));
      }
    }
  }
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(r.value >= 1.0);
  // reported minimizer reproduces the value
  const auto g = FunctionSpec::product({FunctionSpec::character(r.best_character), FunctionSpec::twist(r.best_t)});
  CHECK(std::abs(distance({lam, g, 2, 10'000}, t) - r.value) <= 1e-9);

  opt.budget = 1e6;
  CHECK_THROWS_AS(min_distance_over_twists(lam, 10'000, opt, t), BudgetExceeded);
}

TEST_CASE("truncated scan reports its cutoff") {
  const auto& t = table();
  TwistScanOptions opt;
  opt.t_cap = 1.0;
  opt.t_step = 0.05;
  opt.truncate_at = 1000;
  const auto r = min_distance_over_twists(FunctionSpec::liouville(), 100'000, opt, t);
  CHECK(r.y == 1000);
  const auto g = FunctionSpec::product({FunctionSpec::character(r.best_character), FunctionSpec::twist(r.best_t)});
  CHECK(std::abs(distance({FunctionSpec::liouville(), g, 1000, 100'000}, t) - r.value) <= 1e-9);
}

TEST_CASE("moderate pretension profile") {
  const auto& t = table();
  TwistScanOptions opt;
  opt.t_cap = 5.0;
  opt.t_step = 0.05;
  const auto chi4 = FunctionSpec::character(real_primitive_character(4));
  for (const auto& pt : moderate_pretension_profile(chi4, {1000, 10'000, 100'000}, 1.0, opt, t)) {
    CHECK(pt.normalized == doctest::Approx(0.5 / std::log(std::log(static_cast<double>(pt.X)))).epsilon(1e-9));
    CHECK(pt.scan.q_max == static_cast<std::uint64_t>(std::floor(std::log(static_cast<double>(pt.X)))));
  }
  // P = {p_{m floor(log m)}}: relative density 0, divergent reciprocal sum.
  const auto sparse = FunctionSpec::liouville_like(PrimeSet::index_gap(1, 1, t.limit()), true);
  const std::vector<std::uint64_t> xs{1000, 10'000, 100'000, 1'000'000};
  const auto prof = moderate_pretension_profile(sparse, xs, 0.5, opt, t);
  // Untwisted normalized distance, independent numpy oracle over the same P.
  const double untwisted[] = {1.6544374895543175, 1.484991326020741, 1.3760042732675906, 1.296696666664858};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d2 = distance_squared({sparse, FunctionSpec::one(), 2, xs[i]}, t);
    const double ll = std::log(std::log(static_cast<double>(xs[i])));
    CHECK(d2 / ll == doctest::Approx(untwisted[i]).epsilon(1e-9));
    if (i > 0) CHECK(untwisted[i] < untwisted[i - 1]);
    // the scan includes (t = 0, principal mod 1), so it can only do better
    CHECK(prof[i].normalized <= d2 / ll);
  }
  // Frozen scan values (A = 0.5, T <= 5, step 0.05); the infimum is not monotone at these scales.
  const double frozen[] = {0.782957, 0.785155, 0.816035, 0.828994};
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(prof[i].normalized == doctest::Approx(frozen[i]).epsilon(1e-5));
  CHECK_THROWS_AS(moderate_pretension_profile(chi4, {2}, 1.0, opt, t), InvalidArgument);
}
