#include "mflab/pretdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mflab {

namespace {

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// Index range of primes p with y <= p <= x.
std::pair<std::size_t, std::size_t> prime_span(const SpfTable& table, std::uint64_t y,
                                               std::uint64_t x) {
  const auto primes = table.primes();
  const auto lo = std::lower_bound(primes.begin(), primes.end(), y) - primes.begin();
  const auto hi = std::upper_bound(primes.begin(), primes.end(), x) - primes.begin();
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(std::max(lo, hi))};
}

}  // namespace

double distance_squared(const DistanceQuery& q, const SpfTable& table) {
  require(q.y >= 1 && q.y <= q.x, "distance: need y <= x");
  require(q.x <= table.limit(), "distance: x=" + std::to_string(q.x) + " exceeds sieve limit");
  const auto primes = table.primes();
  const auto [lo, hi] = prime_span(table, q.y, q.x);
  Kahan k;
  for (std::size_t i = lo; i < hi; ++i) {
    const std::uint64_t p = primes[i];
    const double re = (q.f.prime_power(p, 1) * std::conj(q.g.prime_power(p, 1))).real();
    k.add((1.0 - re) / static_cast<double>(p));
  }
  return std::max(0.0, k.sum);
}

double distance(const DistanceQuery& q, const SpfTable& table) {
  return std::sqrt(distance_squared(q, table));
}

TwistProfile twist_distance_profile(double u, std::uint64_t X, const SpfTable& table) {
  require(std::abs(u) <= 1.0, "twist_distance_profile: need |u| <= 1");
  require(X >= 2, "twist_distance_profile: need X >= 2");
  DistanceQuery q{FunctionSpec::twist(u), FunctionSpec::one(), 2, X};
  return {distance_squared(q, table), std::log1p(std::abs(u) * std::log(static_cast<double>(X)))};
}

TwistScanResult min_distance_over_twists(const FunctionSpec& f, std::uint64_t X,
                                         const TwistScanOptions& opt, const SpfTable& table) {
  require(opt.t_step > 0.0, "min_distance_over_twists: t_step must be positive");
  require(X >= 2 && X <= table.limit(), "min_distance_over_twists: X outside sieve range");
  require(opt.t_cap >= 0.0, "min_distance_over_twists: t_cap must be >= 0");
  const std::uint64_t y = opt.truncate_at.value_or(2);
  require(y >= 1 && y <= X, "min_distance_over_twists: need y <= X");

  const double T = std::min(std::pow(static_cast<double>(X), opt.A), opt.t_cap);
  const auto steps = static_cast<std::int64_t>(std::floor(2.0 * T / opt.t_step + 1e-9));
  const std::size_t grid = static_cast<std::size_t>(steps) + 1;

  std::vector<RealCharacter> chars;
  for (std::uint64_t q = 1; q <= std::max<std::uint64_t>(1, opt.q_max); ++q) {
    for (auto& c : real_characters_mod(q)) chars.push_back(std::move(c));
  }

  const auto primes = table.primes();
  const auto [lo, hi] = prime_span(table, y, X);
  const std::size_t np = hi - lo;
  const double work = static_cast<double>(np) * static_cast<double>(grid) * static_cast<double>(chars.size());
  if (work > opt.budget) {
    throw BudgetExceeded("min_distance_over_twists: " + std::to_string(work) +
                         " prime-grid-character evaluations exceed budget " + std::to_string(opt.budget));
  }

  std::vector<cplx> fp(np);
  std::vector<double> logp(np), inv(np);
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = primes[lo + i];
    fp[i] = f.prime_power(p, 1);
    logp[i] = std::log(static_cast<double>(p));
    inv[i] = 1.0 / static_cast<double>(p);
  }

  const std::size_t total = chars.size() * grid;
  std::vector<double> values(total);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
    const auto c = static_cast<std::size_t>(idx) / grid;
    const auto j = static_cast<std::size_t>(idx) % grid;
    const double t = -T + static_cast<double>(j) * opt.t_step;
    const RealCharacter& chi = chars[c];
    Kahan k;
    for (std::size_t i = 0; i < np; ++i) {
      const int cv = chi.value(primes[lo + i]);
      // g(p) = chi(p) p^{it}; Re f(p) conj g(p)
      const cplx g = static_cast<double>(cv) * std::polar(1.0, t * logp[i]);
      k.add((1.0 - (fp[i] * std::conj(g)).real()) * inv[i]);
    }
    values[static_cast<std::size_t>(idx)] = std::max(0.0, k.sum);
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

  TwistScanResult r;
  r.best_character = chars[best / grid];
  r.best_t = -T + static_cast<double>(best % grid) * opt.t_step;
  r.value = std::sqrt(values[best]);
  r.t_step = opt.t_step;
  r.T = T;
  r.A = opt.A;
  r.q_max = opt.q_max;
  r.y = y;
  r.grid_points = grid;
  r.characters = chars.size();
  return r;
}

std::vector<PretensionPoint> moderate_pretension_profile(const FunctionSpec& f,
                                                         const std::vector<std::uint64_t>& X_grid,
                                                         double A, const TwistScanOptions& base,
                                                         const SpfTable& table) {
  std::vector<PretensionPoint> out;
  for (std::uint64_t X : X_grid) {
    require(X >= 3, "moderate_pretension_profile: log log X must be positive (need X >= 3)");
    TwistScanOptions opt = base;
    opt.A = A;
    opt.q_max = static_cast<std::uint64_t>(std::floor(std::pow(std::log(static_cast<double>(X)), A)));
    const auto scan = min_distance_over_twists(f, X, opt, table);
    const double ll = std::log(std::log(static_cast<double>(X)));
    out.push_back({X, scan.value * scan.value / ll, scan});
  }
  return out;
}

}  // namespace mflab
