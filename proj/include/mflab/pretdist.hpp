#pragma once

// Pretentious distance D(f, g; y, x) and scans over twists chi(n) n^{it}.

#include <cstdint>
#include <optional>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab {

struct DistanceQuery {
  FunctionSpec f = FunctionSpec::one();
  FunctionSpec g = FunctionSpec::one();
  std::uint64_t y = 2;
  std::uint64_t x = 2;
};

/// D^2 = sum_{y <= p <= x} (1 - Re f(p) conj g(p)) / p, Kahan-summed in
/// increasing p.
double distance_squared(const DistanceQuery& q, const SpfTable& table);
double distance(const DistanceQuery& q, const SpfTable& table);

struct TwistProfile {
  double measured;   // D(n^{iu}, 1; X)^2
  double predicted;  // log(1 + |u| log X)
};

/// Requires |u| <= 1 and X <= table.limit().
TwistProfile twist_distance_profile(double u, std::uint64_t X, const SpfTable& table);

struct TwistScanOptions {
  double A = 1.0;
  double t_step = 0.01;
  std::uint64_t q_max = 1;
  /// T = min(X^A, t_cap).
  double t_cap = 1e3;
  /// Lower prime cutoff y for the truncated distance.
  std::optional<std::uint64_t> truncate_at;
  /// Upper bound on primes x grid points x characters.
  double budget = 2e10;
};

struct TwistScanResult {
  double best_t = 0.0;
  RealCharacter best_character;
  double value = 0.0;  // the minimal distance (not squared)
  // grid metadata
  double t_step = 0.0;
  double T = 0.0;
  double A = 0.0;
  std::uint64_t q_max = 0;
  std::uint64_t y = 2;
  std::size_t grid_points = 0;
  std::size_t characters = 0;
};

/// Minimum of D(f, chi(n) n^{it}; [y,] X) over t in {-T, -T + t_step, ...}
/// (up to T) and every real character of modulus q <= q_max. Only real
/// characters are scanned. Ties go to the earliest (character, t) in scan
/// order. Throws BudgetExceeded when primes x grid x characters > budget.
TwistScanResult min_distance_over_twists(const FunctionSpec& f, std::uint64_t X,
                                         const TwistScanOptions& opt, const SpfTable& table);

struct PretensionPoint {
  std::uint64_t X;
  double normalized;  // min distance^2 / log log X
  TwistScanResult scan;
};

/// For each X: q_max = floor((log X)^A), T = min(X^A, t_cap), then
/// min_distance_over_twists(...)^2 / log log X. Requires X >= 3.
std::vector<PretensionPoint> moderate_pretension_profile(const FunctionSpec& f,
                                                         const std::vector<std::uint64_t>& X_grid,
                                                         double A, const TwistScanOptions& base,
                                                         const SpfTable& table);

}  // namespace mflab
