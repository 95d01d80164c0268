#pragma once

// Weighted multipoint correlation averages, densities and the decoupling
// discrepancy.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab {

/// cesaro: weight 1; log: 1/n; loglog: 1/(n log n). Each average is
/// normalized by the total weight of its window.
enum class AverageMode { cesaro, log, loglog };

std::string mode_name(AverageMode m);
AverageMode mode_from_name(const std::string& s);

/// Default window start for scale x: 1 (cesaro), ceil(sqrt x) (log),
/// max(3, ceil(x^{1/log log x})) (loglog; 3 when x < 16).
std::uint64_t default_window_start(AverageMode m, std::uint64_t x);
double mode_weight(AverageMode m, std::uint64_t n);

struct CorrelationFactor {
  FunctionSpec f = FunctionSpec::one();
  std::uint64_t a = 1;  // dilation
  std::uint64_t h = 0;  // shift
  unsigned e = 1;       // exponent
};

struct CorrelationSpec {
  std::vector<CorrelationFactor> factors;
  AverageMode mode = AverageMode::cesaro;
  std::uint64_t x = 0;
  /// Caller asserts a_i h_j != a_j h_i; a violation is annotated, not fatal.
  bool nondegenerate = false;
  /// Overrides default_window_start.
  std::optional<std::uint64_t> start;
};

struct CorrelationResult {
  cplx value;
  std::uint64_t lo = 1;  // averaging window [lo, x]
  std::uint64_t x = 0;
  double total_weight = 0.0;
  bool degenerate = false;
  std::string annotation;
};

/// True when a_i h_j == a_j h_i for some i != j.
bool is_degenerate(const std::vector<CorrelationFactor>& factors);

/// Mode-weighted average of prod_j f_j(a_j n + h_j)^{e_j} over the window.
/// Requires max_j (a_j x + h_j) <= table.limit().
CorrelationResult correlation(const CorrelationSpec& spec, const SpfTable& table);

/// One correlation per grid point from a single evaluation pass; spec.x is
/// ignored. Each point is bit-identical to a single-shot correlation at x.
std::vector<CorrelationResult> correlation_scan(const CorrelationSpec& spec,
                                                const std::vector<std::uint64_t>& xs,
                                                const SpfTable& table);

/// floor(lo * ratio^k) for k = 0, 1, ... while <= hi, deduplicated, plus hi.
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, double ratio);

/// Cesaro average of prod_j f_j(a_j n + h_j)^{e_j} over n in [lo, hi], for
/// windows beyond the sieve (values via segmented factorization).
cplx window_correlation(const std::vector<CorrelationFactor>& factors, std::uint64_t lo,
                        std::uint64_t hi, const SegmentedFactorizer& factorizer);

struct DensityEstimate {
  AverageMode mode = AverageMode::cesaro;
  std::uint64_t lo = 1;
  std::uint64_t x = 0;
  double value = 0.0;
};

/// Indicator of a set; called concurrently, so it must be thread safe.
using Indicator = std::function<bool(std::uint64_t)>;

DensityEstimate density(const Indicator& in_set, AverageMode mode, std::uint64_t x,
                        std::optional<std::uint64_t> start = std::nullopt);
/// mask[n - 1] is the indicator of n, n = 1..mask.size(); x <= mask.size().
DensityEstimate density(std::span<const std::uint8_t> mask, AverageMode mode, std::uint64_t x,
                        std::optional<std::uint64_t> start = std::nullopt);

struct DensitySeriesPoint {
  DensityEstimate estimate;
  double running_sup;  // max of the estimates up to this grid point
  double running_inf;
};

/// Estimates along a scale grid with running sup/inf (finite stand-ins for
/// the upper and lower densities).
std::vector<DensitySeriesPoint> density_series(std::span<const std::uint8_t> mask, AverageMode mode,
                                               const std::vector<std::uint64_t>& xs);

/// E^log_{p <= P_cap} | E_{n<=x} f(n+p h1) g(n+p h2) - E_{n<=x/p} f(p(n+h1)) g(p(n+h2)) |
/// with prime weights 1/p normalized by their sum.
double decoupling_discrepancy(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t h1,
                              std::uint64_t h2, std::uint64_t P_cap, std::uint64_t x,
                              const SpfTable& table);

namespace reference {
/// Serial pointwise evaluation of the same weighted average.
CorrelationResult correlation(const CorrelationSpec& spec, const SpfTable& table);
}  // namespace reference

}  // namespace mflab
