#include "doctest.h"

#include <cmath>
#include <random>

#include "mflab/furst.hpp"

using namespace mflab;

namespace {

const SpfTable& table() {
  static const SpfTable t = build_spf_sieve(1'000'100);
  return t;
}

Cylinder cyl(std::map<std::int64_t, int> a) { return Cylinder{std::move(a)}; }

FunctionSpec sparse() {
  return FunctionSpec::liouville_like(PrimeSet::index_gap(2, 1, table().limit()), true);
}

std::vector<Cylinder> short_cylinders() {
  std::vector<Cylinder> out;
  for (const auto& sup : std::vector<std::vector<std::int64_t>>{{0}, {0, 1}, {0, 2}, {0, 1, 2}}) {
    for (auto& c : all_cylinders(sup, {-1, 0, 1})) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

TEST_CASE("cylinder frequency examples") {
  const auto& t = table();
  CHECK(cylinder_frequency(FunctionSpec::one(), cyl({{0, 1}}), 1000, t) == 1.0);
  CHECK(cylinder_frequency(FunctionSpec::liouville(), cyl({}), 1000, t) == 1.0);
  // direct count oracle by trial-division Omega
  std::uint64_t hits = 0;
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    int omega = 0;
    std::uint64_t m = n;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
      while (m % d == 0) {
        m /= d;
        ++omega;
      }
    }
    if (m > 1) ++omega;
    hits += omega % 2 == 0;
  }
  const double lam = cylinder_frequency(FunctionSpec::liouville(), cyl({{0, 1}}), 1'000'000, t);
  CHECK(lam == static_cast<double>(hits) / 1e6);
  CHECK(std::abs(lam - 0.5) <= 0.01);
  // negative coordinates shift the scan start
  const auto cnt = cylinder_count(FunctionSpec::liouville(), cyl({{-3, 1}, {0, -1}}), 100, t);
  CHECK(cnt.window == 97);
  CHECK_THROWS_AS(cylinder_frequency(FunctionSpec::liouville(), cyl({{200, 1}}), t.limit(), t), InvalidArgument);
  CHECK_THROWS_AS(cylinder_frequency(FunctionSpec::twist(1.0), cyl({{0, 1}}), 10, t), InvalidArgument);
}

TEST_CASE("product relation examples") {
  const auto& t = table();
  const auto f = sparse();
  auto r = check_product_relation(f, FunctionSpec::one(), {cyl({{0, 1}, {1, 1}})}, 1'000'000, t);
  CHECK(r.rhs[0] == 0.25);
  CHECK(r.max_deviation <= 0.02);
  r = check_product_relation(f, FunctionSpec::one(), {cyl({})}, 1'000'000, t);
  CHECK(r.max_deviation == 0.0);
  const auto mu2 = FunctionSpec::power(FunctionSpec::moebius(), 2);
  r = check_product_relation(f, mu2, short_cylinders(), 1'000'000, t);
  CHECK(r.lhs.size() == 3 + 9 + 9 + 27);
  // independent numpy oracle over the same P and cylinder list
  CHECK(r.max_deviation == doctest::Approx(0.0057253).epsilon(1e-4));
  CHECK(r.max_deviation <= 0.02);
  CHECK_THROWS_AS(check_product_relation(mu2, mu2, {cyl({{0, 1}})}, 100, t), InvalidArgument);
}

TEST_CASE("cylinder properties") {
  const auto& t = table();
  const std::uint64_t x = 200'000;
  std::mt19937_64 rng(3);
  for (const auto& f : {FunctionSpec::liouville(), FunctionSpec::moebius(), sparse(),
                        FunctionSpec::character(real_primitive_character(12))}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::int64_t> sup;
      for (std::int64_t c = -3; c <= 3; ++c) {
        if (rng() % 3 == 0) sup.push_back(c);
      }
      if (sup.empty()) sup.push_back(0);
      // partition of unity in exact integer counts
      std::uint64_t total = 0, window = 0;
      for (const auto& c : all_cylinders(sup, {-1, 0, 1})) {
        const auto cnt = cylinder_count(f, c, x, t);
        total += cnt.hits;
        window = cnt.window;
      }
      REQUIRE(total == window);
      const auto c = all_cylinders(sup, {-1, 0, 1})[rng() % 3];
      // shift stability
      const double a = cylinder_frequency(f, c, x, t);
      const double b = cylinder_frequency(f, c.shifted(1), x, t);
      REQUIRE(std::abs(a - b) <= 2.0 * static_cast<double>(c.support_size()) / static_cast<double>(x - 3) + 1e-15);
      // monotonicity under enlarging the support (same scan window)
      Cylinder big = c;
      big.assignment[10] = 1;  // adding a positive coordinate keeps the scan window
      const auto cs = cylinder_count(f, c, x, t);
      const auto cb = cylinder_count(f, big, x, t);
      REQUIRE(cb.window == cs.window);
      REQUIRE(cb.hits <= cs.hits);
    }
  }
}
