#pragma once

// Classification of completely multiplicative +-1 functions of length 3:
// candidates are real characters mod m in {1, 3, 4, 8} or a prime 3 < p0 < 197,
// modified at 2, 3 and p0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab {

struct HudsonCandidate {
  std::uint64_t m = 1;
  RealCharacter chi;  // primitive of conductor m (trivial for m = 1)
  int f2 = 1;         // f(2)
  int f3 = 1;         // f(3)
  int fp0 = 0;        // f(p0) when m = p0 > 3 is prime, else 0

  bool prime_modulus() const noexcept { return m > 3 && m != 4 && m != 8; }
  /// f(j) * chi(j) for j = 2, 3 (the criterion's parameters).
  int fchi2() const noexcept { return f2 * chi.value(2); }
  int fchi3() const noexcept { return f3 * chi.value(3); }
  /// f(n), exact: strip 2, 3 and p0 and read the character on the cofactor.
  int value(std::uint64_t n) const;
  FunctionSpec function() const;
  std::string label() const;
};

/// Full space in enumeration order: m = 1, 3, 4, 8 (chi8 then psi8), then
/// primes ascending; (f2, f3[, fp0]) lexicographic with +1 before -1.
std::vector<HudsonCandidate> hudson_candidates();

/// sum_{d mod p0} (d(1-d) / p0). Requires p0 an odd prime.
std::int64_t jacobi_sum(std::uint64_t p0);

/// Xi_S = sum_{a=1}^{p0} ( prod_{j in S} (36a + j) / p0 ), S a nonempty
/// subset of {1,2,3,4}. Requires p0 > 3 prime.
std::int64_t char_sum_xi(std::uint64_t p0, const std::vector<int>& S);

struct ModulusBoundReport {
  std::uint64_t p0;
  std::int64_t rhs;        // 32 + sum over nonempty S of |Xi_S|
  bool excluded;           // p0 > rhs
  double weil_rhs;         // 38 + 11 sqrt(p0)
  bool weil_ok;            // rhs <= weil_rhs
};

ModulusBoundReport modulus_bound_report(std::uint64_t p0);

/// Smallest n >= 1 with 24n + 4 < p0^3 and
/// prod_{j=1}^4 (1 + f(j)(j/p0)((24n+j)/p0)) > 0.
std::optional<std::uint64_t> criterion_search(std::uint64_t p0, int fchi2, int fchi3);
std::optional<std::uint64_t> criterion_search(const HudsonCandidate& c);

/// Smallest s in [1, cap] with f(s) = f(s+1) = f(s+2) = f(s+3) = +1.
std::optional<std::uint64_t> direct_pattern_witness(const HudsonCandidate& c, std::uint64_t cap);

enum class HudsonStatus { member, excluded_by_criterion, excluded_by_witness, length_two };
std::string status_name(HudsonStatus s);

struct ClassificationRow {
  HudsonCandidate candidate;
  HudsonStatus status = HudsonStatus::member;
  std::optional<std::uint64_t> witness;  // criterion n or direct witness
  std::uint64_t bound;                   // search bound used
  /// deep mode: direct witness found for a criterion exclusion
  std::optional<std::uint64_t> deep_witness;
  bool mismatch = false;
};

struct ClassificationOptions {
  bool deep_verify = false;
  std::uint64_t witness_cap = 100'000;
};

/// One row per candidate, in hudson_candidates() order.
std::vector<ClassificationRow> enumerate_all_candidates(const ClassificationOptions& opt = {});

/// True for the 13 expected members: f_p^{+-} (p = 5, 7, 11, 13, 53), g_1, g_2, g_3.
bool is_listed_member(const HudsonCandidate& c);

std::string classification_csv(const std::vector<ClassificationRow>& rows);
/// {"members": .., "excluded": .., "length_two": .., "mismatches": .., "candidates": ..}
std::string classification_summary_json(const std::vector<ClassificationRow>& rows);

}  // namespace mflab
