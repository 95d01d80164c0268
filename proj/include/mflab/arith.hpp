#pragma once

// Integer arithmetic substrate: smallest-prime-factor sieve, factorization,
// Jacobi symbols, real Dirichlet characters and prime subsets.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mflab/error.hpp"

namespace mflab {

/// Smallest-prime-factor table for 2..limit. Entries are 32-bit, so the
/// table is capped below 2^32. Memory is 4 bytes per integer plus the prime
/// list (a limit of 10^8 needs roughly 420 MB).
class SpfTable {
 public:
  static constexpr std::uint64_t kMaxLimit = (std::uint64_t{1} << 32) - 1;

  SpfTable() = default;

  std::uint64_t limit() const noexcept { return limit_; }

  /// spf(n) for 2 <= n <= limit; no bounds check.
  std::uint32_t spf(std::uint64_t n) const noexcept { return spf_[n]; }
  bool is_prime(std::uint64_t n) const noexcept {
    return n >= 2 && n <= limit_ && spf_[n] == n;
  }
  bool contains(std::uint64_t n) const noexcept { return n >= 1 && n <= limit_; }

  /// Primes up to limit in increasing order.
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  /// Raw entries indexed by n (entries 0 and 1 are 0).
  std::span<const std::uint32_t> entries() const noexcept { return spf_; }

  friend SpfTable build_spf_sieve(std::uint64_t limit);
  friend SpfTable load_spf_cache(const std::string& path);

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

/// Linear sieve. Throws InvalidArgument for limit < 2 or limit >= 2^32.
SpfTable build_spf_sieve(std::uint64_t limit);

/// Sieve cache file: magic "MFLAB1\0", limit as u64 LE, then spf[2..limit]
/// as u32 LE.
void save_spf_cache(const std::string& path, const SpfTable& table);
SpfTable load_spf_cache(const std::string& path);

/// Plain sieve of Eratosthenes, primes <= bound.
std::vector<std::uint32_t> primes_up_to(std::uint64_t bound);

/// Deterministic trial-division primality, for small standalone checks.
bool is_prime_u64(std::uint64_t n);

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class PrimeSet;

/// Ordered (prime, exponent) list, primes strictly increasing.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> parts) : parts_(std::move(parts)) {}

  const std::vector<PrimePower>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }

  std::uint64_t value() const;
  /// Omega(n): prime factors with multiplicity.
  std::uint32_t big_omega() const noexcept;
  /// omega(n): distinct prime factors.
  std::uint32_t small_omega() const noexcept { return static_cast<std::uint32_t>(parts_.size()); }
  std::uint32_t big_omega(const PrimeSet& primes) const;
  std::uint32_t small_omega(const PrimeSet& primes) const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> parts_;
};

/// Factor 1 <= n <= table.limit().
Factorization factorize(std::uint64_t n, const SpfTable& table);

/// Jacobi symbol (a/m) for odd m >= 1, binary reciprocity algorithm.
int jacobi_symbol(std::int64_t a, std::int64_t m);

/// Legendre symbols mod an odd prime p as a residue table (index a mod p).
std::vector<std::int8_t> legendre_table(std::uint64_t p);

/// Selects the 2-adic factor of a real primitive character whose conductor
/// is divisible by 8: chi8 is the odd character with chi8(3) = +1,
/// chi8(5) = -1; psi8 is the even one with psi8(3) = psi8(5) = -1.
enum class Mod8Choice { chi8, psi8 };

/// A real Dirichlet character given by its value table on residues mod m.
class RealCharacter {
 public:
  RealCharacter() : RealCharacter(1, {1}, true, 1, std::nullopt) {}
  RealCharacter(std::uint64_t modulus, std::vector<std::int8_t> values, bool primitive,
                std::uint64_t conductor, std::optional<Mod8Choice> choice);

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t conductor() const noexcept { return conductor_; }
  bool primitive() const noexcept { return primitive_; }
  bool principal() const noexcept { return conductor_ == 1; }
  std::optional<Mod8Choice> mod8_choice() const noexcept { return choice_; }

  int value(std::uint64_t n) const noexcept {
    return values_[static_cast<std::size_t>(n % modulus_)];
  }
  /// Value at a possibly negative integer.
  int value_signed(std::int64_t n) const noexcept;
  const std::vector<std::int8_t>& table() const noexcept { return values_; }

  /// Short identifier such as "1", "chi_5", "psi_8", "chi_12", "chi_4 mod 12".
  std::string id() const;

  friend bool operator==(const RealCharacter& a, const RealCharacter& b) {
    return a.modulus_ == b.modulus_ && a.values_ == b.values_;
  }

 private:
  std::uint64_t modulus_;
  std::vector<std::int8_t> values_;
  bool primitive_;
  std::uint64_t conductor_;
  std::optional<Mod8Choice> choice_;
};

/// m = 2^k m' with k in {0,2,3}, m' odd squarefree, m != 1: the conductors
/// of real primitive characters.
bool is_real_conductor(std::uint64_t m);

/// The real primitive character of conductor m, assembled from Legendre
/// symbols of the odd prime factors and the mod-4/mod-8 factor. A Mod8Choice
/// is required exactly when 8 | m.
RealCharacter real_primitive_character(std::uint64_t m,
                                       std::optional<Mod8Choice> choice = std::nullopt);

/// Character mod q induced by the primitive character of conductor d | q.
RealCharacter induced_character(std::uint64_t q, std::uint64_t d,
                                std::optional<Mod8Choice> choice = std::nullopt);

/// Principal character mod q.
RealCharacter principal_character(std::uint64_t q);

/// Every real character mod q (principal first, then by conductor).
std::vector<RealCharacter> real_characters_mod(std::uint64_t q);

/// A set of primes given explicitly or by a rule on prime indices
/// (p_1 = 2). Membership is materialized up to max_prime at construction.
class PrimeSet {
 public:
  enum class Rule { all, explicit_list, every_kth, index_gap };

  /// Every prime.
  static PrimeSet all(std::uint64_t max_prime);
  static PrimeSet explicit_list(std::vector<std::uint64_t> primes);
  /// p_i with i divisible by k.
  static PrimeSet every_kth(std::uint64_t k, std::uint64_t max_prime);
  /// p_{m * max(1, floor(L(m)))} for m >= start, where L is the
  /// depth-fold iterated natural log (multiplier 1 where L(m) is undefined
  /// or below 1). depth = 3 is log log log.
  static PrimeSet index_gap(unsigned depth, std::uint64_t start, std::uint64_t max_prime);

  Rule rule() const noexcept { return rule_; }
  std::uint64_t k() const noexcept { return k_; }
  unsigned depth() const noexcept { return depth_; }
  std::uint64_t start() const noexcept { return start_; }
  std::uint64_t max_prime() const noexcept { return max_prime_; }

  /// Throws InvalidArgument for p beyond max_prime (unless the rule is
  /// all or explicit_list).
  bool contains(std::uint64_t p) const;
  const std::vector<std::uint64_t>& members() const noexcept { return data_->members; }
  std::string describe() const;

  friend bool operator==(const PrimeSet& a, const PrimeSet& b) {
    return a.rule_ == b.rule_ && a.k_ == b.k_ && a.depth_ == b.depth_ &&
           a.start_ == b.start_ && a.max_prime_ == b.max_prime_ &&
           a.data_->members == b.data_->members;
  }

 private:
  struct Data {
    std::vector<std::uint64_t> members;
    std::vector<std::uint8_t> bitmap;  // indexed by n <= max_prime
  };
  PrimeSet() = default;
  static PrimeSet from_indices(Rule rule, std::uint64_t max_prime,
                               const std::vector<std::uint32_t>& primes,
                               const std::vector<std::uint64_t>& indices);

  Rule rule_ = Rule::all;
  std::uint64_t k_ = 0;
  unsigned depth_ = 0;
  std::uint64_t start_ = 0;
  std::uint64_t max_prime_ = 0;
  std::shared_ptr<const Data> data_;
};

/// Omega_P(n) when multiplicity is true, omega_P(n) otherwise.
std::uint32_t restricted_prime_count(std::uint64_t n, const PrimeSet& primes, bool multiplicity,
                                     const SpfTable& table);

/// Factors every integer of [lo, hi] with a segmented sieve, for windows far
/// beyond any SpfTable. visit(n, p, e) is called once for each prime power
/// p^e || n. Calls for different n interleave; for a fixed n the primes
/// arrive in increasing order.
class SegmentedFactorizer {
 public:
  explicit SegmentedFactorizer(std::uint64_t hi);

  std::uint64_t max_value() const noexcept { return hi_; }

  template <typename Visit>
  void factor_window(std::uint64_t lo, std::uint64_t hi, Visit&& visit) const;

 private:
  std::uint64_t hi_;
  std::vector<std::uint32_t> primes_;
};

template <typename Visit>
void SegmentedFactorizer::factor_window(std::uint64_t lo, std::uint64_t hi, Visit&& visit) const {
  require(lo >= 1 && lo <= hi, "factor_window: need 1 <= lo <= hi");
  require(hi <= hi_, "factor_window: hi beyond factorizer bound");
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::uint64_t> rest(len);
  for (std::size_t i = 0; i < len; ++i) rest[i] = lo + i;
  for (std::uint32_t p32 : primes_) {
    const std::uint64_t p = p32;
    if (p * p > hi) break;
    const std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t m = first; m <= hi; m += p) {
      const std::size_t i = static_cast<std::size_t>(m - lo);
      std::uint32_t e = 0;
      while (rest[i] % p == 0) {
        rest[i] /= p;
        ++e;
      }
      visit(m, p, e);
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (rest[i] > 1) visit(lo + i, rest[i], std::uint32_t{1});
  }
}

}  // namespace mflab
