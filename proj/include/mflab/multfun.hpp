#pragma once

// Bounded multiplicative functions: a small expression tree of named kinds
// with per-prime overrides, pointwise and bulk evaluation, JSON round trip.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mflab/arith.hpp"

namespace mflab {

using cplx = std::complex<double>;

enum class FunctionKind {
  constant_one,
  liouville,
  moebius,
  liouville_like_big_omega,
  liouville_like_small_omega,
  real_character,
  modified_character,
  archimedean_twist,
  mrt,
  pointwise_product,
  conjugate,
  power,
};

std::string kind_name(FunctionKind k);
FunctionKind kind_from_name(const std::string& name);

/// Parameters of the relaxed-growth construction. Stage 1 sets f(p) = 1 for
/// p <= M; stage k+1 finds s > exp(t_k) on the grid exp(t_k) + j*grid_step
/// (j >= 1) with max_{p <= t_k} |p^{is} - f(p)| <= t_k^-2, sets
/// t_{k+1} = s^growth_exponent and f(p) = p^{is} on (t_k, t_{k+1}]. The last
/// stage's twist extends to every larger prime.
struct MrtParams {
  std::uint64_t M = 10;
  unsigned depth = 2;
  double growth_exponent = 2.0;
  double grid_step = 1e-3;
  /// Largest s - exp(t_k) examined before giving up.
  double search_span = 1e9;
};

struct MrtStage {
  double t_lo;  // primes in (t_lo, t_hi]
  double t_hi;
  double s;     // f(p) = p^{is}; 0 for stage 1
  double deviation;  // achieved max |p^{is} - f(p)| over p <= t_lo
};

struct MrtConstruction {
  MrtParams params;
  std::vector<MrtStage> stages;

  /// f(p) for a prime p.
  cplx prime_value(std::uint64_t p) const;
  /// Twist of the stage that owns p (0 on stage 1).
  double twist_for(std::uint64_t p) const;
};

struct MrtTwist {
  double s;
  double deviation;
};

/// Grid search for the next twist given the stages built so far. Throws
/// BudgetExceeded (carrying the best s and its deviation) when no grid
/// point within search_span qualifies.
MrtTwist mrt_find_twist(const MrtConstruction& state, double epsilon);

/// Runs all depth stages. Depth 1 is just f(p) = 1 for p <= M (and every
/// larger prime).
MrtConstruction build_mrt(const MrtParams& params);

class FunctionSpec {
 public:
  static FunctionSpec one();
  static FunctionSpec liouville();
  static FunctionSpec moebius();
  /// (-1)^{Omega_P(n)} when multiplicity, else (-1)^{omega_P(n)}.
  static FunctionSpec liouville_like(const PrimeSet& primes, bool multiplicity);
  static FunctionSpec character(const RealCharacter& chi);
  static FunctionSpec modified_character(const RealCharacter& chi,
                                         const std::map<std::uint64_t, int>& overrides);
  static FunctionSpec twist(double t);
  static FunctionSpec mrt(const MrtConstruction& c);
  static FunctionSpec product(std::vector<FunctionSpec> factors);
  static FunctionSpec conjugate(const FunctionSpec& inner);
  static FunctionSpec power(const FunctionSpec& inner, unsigned e);

  /// Modified Legendre symbol f_p^{sign}.
  static FunctionSpec modified_legendre(std::uint64_t p, int sign);
  /// g_1 (which = 1), g_2, g_3 of the 13-member list.
  static FunctionSpec hudson_g(int which);

  /// Copy with f(p) replaced by v (|v| <= 1). Completely multiplicative kinds
  /// then give f(p^l) = v^l; others give v wherever the base rule is nonzero.
  FunctionSpec with_override(std::uint64_t p, cplx v) const;

  FunctionKind kind() const noexcept;
  bool complete() const noexcept;
  bool integer_valued() const noexcept;
  const std::map<std::uint64_t, cplx>& overrides() const noexcept;
  /// Kind-specific parameters (meaningful only for the matching kind).
  const std::optional<PrimeSet>& prime_set() const noexcept;
  const RealCharacter& character_param() const noexcept;
  double twist_param() const noexcept;
  const MrtConstruction& mrt_param() const;
  const std::vector<FunctionSpec>& children() const noexcept;
  unsigned exponent() const noexcept;

  /// f(p^e) for prime p, e >= 1.
  cplx prime_power(std::uint64_t p, std::uint32_t e) const;
  /// Same, for integer-valued specs.
  int prime_power_int(std::uint64_t p, std::uint32_t e) const;

  std::string describe() const;

  friend bool operator==(const FunctionSpec& a, const FunctionSpec& b);

  struct Node;

 private:
  explicit FunctionSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// f(base), f(base+1), ... as int8 for integer-valued specs, complex otherwise.
struct ValueBuffer {
  std::uint64_t base = 1;
  std::variant<std::vector<std::int8_t>, std::vector<cplx>> values;

  bool is_integer() const noexcept { return values.index() == 0; }
  std::size_t size() const noexcept;
  const std::vector<std::int8_t>& ints() const { return std::get<0>(values); }
  const std::vector<cplx>& complexes() const { return std::get<1>(values); }
  cplx at(std::uint64_t n) const;
};

/// Pointwise f(n). archimedean-twist needs no table; everything else
/// requires n <= table.limit().
cplx evaluate(const FunctionSpec& f, std::uint64_t n, const SpfTable& table);
int evaluate_int(const FunctionSpec& f, std::uint64_t n, const SpfTable& table);

/// f(lo..hi), parallel over blocks of n.
ValueBuffer evaluate_range(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                           const SpfTable& table);

/// f(lo..hi) for windows beyond any sieve, via segmented factorization.
std::vector<cplx> evaluate_window(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                                  const SegmentedFactorizer& factorizer);

/// Checks f(n + m Q^alpha) == f(n). Throws InvalidArgument on overflow or
/// when the point falls outside the table.
bool verify_periodic_lift(const FunctionSpec& f, std::uint64_t n, std::uint64_t m,
                          unsigned alpha, std::uint64_t Q, const SpfTable& table);

std::string to_json(const FunctionSpec& f);
FunctionSpec function_from_json(const std::string& text);

namespace reference {
/// Serial recurrence f(n) = f(p^e) f(n / p^e) filled for 1..hi in increasing n.
ValueBuffer evaluate_range(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                           const SpfTable& table);
}  // namespace reference

}  // namespace mflab
