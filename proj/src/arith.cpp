#include "mflab/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace mflab {

SpfTable build_spf_sieve(std::uint64_t limit) {
  require(limit >= 2, "build_spf_sieve: limit must be >= 2");
  require(limit <= SpfTable::kMaxLimit, "build_spf_sieve: limit must be < 2^32");
  SpfTable t;
  t.limit_ = limit;
  t.spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  // Linear sieve: every composite n is struck exactly once, by spf(n).
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      t.primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = t.spf_[i];
    for (std::uint32_t p : t.primes_) {
      if (p > si) break;
      const std::uint64_t m = i * p;
      if (m > limit) break;
      t.spf_[m] = p;
    }
  }
  return t;
}

namespace {

constexpr std::array<char, 7> kMagic = {'M', 'F', 'L', 'A', 'B', '1', '\0'};

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, bytes);
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void save_spf_cache(const std::string& path, const SpfTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open sieve cache for writing: " + path);
  out.write(kMagic.data(), kMagic.size());
  put_le(out, table.limit(), 8);
  std::vector<char> block;
  block.reserve(4 * 65536);
  for (std::uint64_t n = 2; n <= table.limit(); ++n) {
    const std::uint32_t v = table.spf(n);
    for (int i = 0; i < 4; ++i) block.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    if (block.size() >= 4 * 65536) {
      out.write(block.data(), static_cast<std::streamsize>(block.size()));
      block.clear();
    }
  }
  out.write(block.data(), static_cast<std::streamsize>(block.size()));
  if (!out) throw FormatError("failed writing sieve cache: " + path);
}

SpfTable load_spf_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open sieve cache: " + path);
  unsigned char head[15];
  in.read(reinterpret_cast<char*>(head), sizeof head);
  if (in.gcount() != static_cast<std::streamsize>(sizeof head) ||
      std::memcmp(head, kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("bad sieve cache header: " + path);
  }
  const std::uint64_t limit = get_le(head + 7, 8);
  if (limit < 2 || limit > SpfTable::kMaxLimit) throw FormatError("bad sieve cache limit");
  SpfTable t;
  t.limit_ = limit;
  t.spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<unsigned char> buf(4 * 65536);
  std::uint64_t n = 2;
  while (n <= limit) {
    const std::uint64_t want = std::min<std::uint64_t>(65536, limit - n + 1);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(4 * want));
    if (in.gcount() != static_cast<std::streamsize>(4 * want)) {
      throw FormatError("truncated sieve cache: " + path);
    }
    for (std::uint64_t i = 0; i < want; ++i, ++n) {
      const auto v = static_cast<std::uint32_t>(get_le(buf.data() + 4 * i, 4));
      if (v < 2 || v > n || n % v != 0) throw FormatError("corrupt sieve cache entry");
      t.spf_[n] = v;
      if (v == n) t.primes_.push_back(v);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in sieve cache");
  return t;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (const auto& pp : parts_) {
    for (std::uint32_t i = 0; i < pp.exponent; ++i) v *= pp.prime;
  }
  return v;
}

std::uint32_t Factorization::big_omega() const noexcept {
  std::uint32_t s = 0;
  for (const auto& pp : parts_) s += pp.exponent;
  return s;
}

std::uint32_t Factorization::big_omega(const PrimeSet& primes) const {
  std::uint32_t s = 0;
  for (const auto& pp : parts_) {
    if (primes.contains(pp.prime)) s += pp.exponent;
  }
  return s;
}

std::uint32_t Factorization::small_omega(const PrimeSet& primes) const {
  std::uint32_t s = 0;
  for (const auto& pp : parts_) {
    if (primes.contains(pp.prime)) ++s;
  }
  return s;
}

Factorization factorize(std::uint64_t n, const SpfTable& table) {
  require(n >= 1, "factorize: n must be >= 1");
  require(n <= table.limit(), "factorize: n exceeds sieve limit");
  std::vector<PrimePower> parts;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    parts.push_back({p, e});
  }
  return Factorization(std::move(parts));
}

int jacobi_symbol(std::int64_t a, std::int64_t m) {
  require(m >= 1 && (m & 1) == 1, "jacobi_symbol: modulus must be odd and positive");
  std::int64_t r = a % m;
  if (r < 0) r += m;
  std::uint64_t x = static_cast<std::uint64_t>(r);
  std::uint64_t n = static_cast<std::uint64_t>(m);
  int sign = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      const std::uint64_t n8 = n & 7;
      if (n8 == 3 || n8 == 5) sign = -sign;
    }
    std::swap(x, n);
    if ((x & 3) == 3 && (n & 3) == 3) sign = -sign;
    x %= n;
  }
  return n == 1 ? sign : 0;
}

std::vector<std::int8_t> legendre_table(std::uint64_t p) {
  require(p >= 3 && (p & 1) == 1, "legendre_table: need an odd prime");
  std::vector<std::int8_t> t(static_cast<std::size_t>(p), -1);
  t[0] = 0;
  for (std::uint64_t a = 1; a < p; ++a) t[static_cast<std::size_t>(a * a % p)] = 1;
  return t;
}

RealCharacter::RealCharacter(std::uint64_t modulus, std::vector<std::int8_t> values,
                             bool primitive, std::uint64_t conductor,
                             std::optional<Mod8Choice> choice)
    : modulus_(modulus),
      values_(std::move(values)),
      primitive_(primitive),
      conductor_(conductor),
      choice_(choice) {
  require(modulus_ >= 1 && values_.size() == modulus_, "RealCharacter: table size must equal modulus");
}

int RealCharacter::value_signed(std::int64_t n) const noexcept {
  const auto m = static_cast<std::int64_t>(modulus_);
  std::int64_t r = n % m;
  if (r < 0) r += m;
  return values_[static_cast<std::size_t>(r)];
}

std::string RealCharacter::id() const {
  if (modulus_ == 1) return "1";
  std::string base;
  if (conductor_ == 1) {
    base = "1";
  } else if (choice_ == Mod8Choice::psi8) {
    base = conductor_ == 8 ? "psi_8" : "psi_8*chi_" + std::to_string(conductor_ / 8);
  } else {
    base = "chi_" + std::to_string(conductor_);
  }
  if (primitive_) return base;
  return base + " mod " + std::to_string(modulus_);
}

namespace {

bool odd_squarefree(std::uint64_t m) {
  if (m % 2 == 0) return false;
  for (std::uint64_t p = 3; p * p <= m; p += 2) {
    if (m % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

bool is_real_conductor(std::uint64_t m) {
  if (m <= 1) return false;
  std::uint64_t k = 0;
  std::uint64_t odd = m;
  while (odd % 2 == 0) {
    odd /= 2;
    ++k;
  }
  if (k != 0 && k != 2 && k != 3) return false;
  return odd_squarefree(odd);
}

RealCharacter real_primitive_character(std::uint64_t m, std::optional<Mod8Choice> choice) {
  require(is_real_conductor(m), "real_primitive_character: " + std::to_string(m) +
                                    " is not the conductor of a real primitive character");
  const bool eight = m % 8 == 0;
  require(eight == choice.has_value(),
          eight ? "real_primitive_character: 8 | m requires a chi8/psi8 choice"
                : "real_primitive_character: chi8/psi8 choice only applies when 8 | m");
  std::uint64_t odd = m;
  while (odd % 2 == 0) odd /= 2;
  const std::uint64_t two_part = m / odd;
  std::vector<std::int8_t> values(static_cast<std::size_t>(m), 0);
  for (std::uint64_t a = 0; a < m; ++a) {
    if (std::gcd(a, m) != 1) continue;
    int v = odd > 1 ? jacobi_symbol(static_cast<std::int64_t>(a), static_cast<std::int64_t>(odd)) : 1;
    if (two_part == 4) {
      v *= (a % 4 == 1) ? 1 : -1;
    } else if (two_part == 8) {
      const std::uint64_t r = a % 8;
      if (*choice == Mod8Choice::chi8) {
        v *= (r == 1 || r == 3) ? 1 : -1;  // chi8(3) = +1, chi8(5) = -1
      } else {
        v *= (r == 1 || r == 7) ? 1 : -1;  // psi8(3) = psi8(5) = -1
      }
    }
    values[static_cast<std::size_t>(a)] = static_cast<std::int8_t>(v);
  }
  return RealCharacter(m, std::move(values), true, m, choice);
}

RealCharacter principal_character(std::uint64_t q) {
  require(q >= 1, "principal_character: modulus must be >= 1");
  std::vector<std::int8_t> values(static_cast<std::size_t>(q), 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) values[static_cast<std::size_t>(a)] = 1;
  }
  return RealCharacter(q, std::move(values), q == 1, 1, std::nullopt);
}

RealCharacter induced_character(std::uint64_t q, std::uint64_t d, std::optional<Mod8Choice> choice) {
  require(q >= 1 && d >= 1 && q % d == 0, "induced_character: conductor must divide modulus");
  if (d == 1) return principal_character(q);
  const RealCharacter prim = real_primitive_character(d, choice);
  if (q == d) return prim;
  std::vector<std::int8_t> values(static_cast<std::size_t>(q), 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) values[static_cast<std::size_t>(a)] = static_cast<std::int8_t>(prim.value(a));
  }
  return RealCharacter(q, std::move(values), false, d, choice);
}

std::vector<RealCharacter> real_characters_mod(std::uint64_t q) {
  require(q >= 1, "real_characters_mod: modulus must be >= 1");
  std::vector<RealCharacter> out;
  out.push_back(principal_character(q));
  for (std::uint64_t d = 2; d <= q; ++d) {
    if (q % d != 0 || !is_real_conductor(d)) continue;
    if (d % 8 == 0) {
      out.push_back(induced_character(q, d, Mod8Choice::chi8));
      out.push_back(induced_character(q, d, Mod8Choice::psi8));
    } else {
      out.push_back(induced_character(q, d));
    }
  }
  return out;
}

PrimeSet PrimeSet::all(std::uint64_t max_prime) {
  PrimeSet s;
  s.rule_ = Rule::all;
  s.max_prime_ = max_prime;
  auto data = std::make_shared<Data>();
  for (std::uint32_t p : primes_up_to(max_prime)) data->members.push_back(p);
  data->bitmap.assign(static_cast<std::size_t>(max_prime) + 1, 0);
  for (std::uint64_t p : data->members) data->bitmap[p] = 1;
  s.data_ = std::move(data);
  return s;
}

PrimeSet PrimeSet::explicit_list(std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t p : primes) require(is_prime_u64(p), "PrimeSet: " + std::to_string(p) + " is not prime");
  PrimeSet s;
  s.rule_ = Rule::explicit_list;
  s.max_prime_ = primes.empty() ? 0 : primes.back();
  auto data = std::make_shared<Data>();
  data->members = std::move(primes);
  data->bitmap.assign(static_cast<std::size_t>(s.max_prime_) + 1, 0);
  for (std::uint64_t p : data->members) data->bitmap[p] = 1;
  s.data_ = std::move(data);
  return s;
}

PrimeSet PrimeSet::from_indices(Rule rule, std::uint64_t max_prime,
                                const std::vector<std::uint32_t>& primes,
                                const std::vector<std::uint64_t>& indices) {
  PrimeSet s;
  s.rule_ = rule;
  s.max_prime_ = max_prime;
  auto data = std::make_shared<Data>();
  for (std::uint64_t i : indices) {
    if (i >= 1 && i <= primes.size()) data->members.push_back(primes[i - 1]);
  }
  std::sort(data->members.begin(), data->members.end());
  data->members.erase(std::unique(data->members.begin(), data->members.end()), data->members.end());
  data->bitmap.assign(static_cast<std::size_t>(max_prime) + 1, 0);
  for (std::uint64_t p : data->members) data->bitmap[p] = 1;
  s.data_ = std::move(data);
  return s;
}

PrimeSet PrimeSet::every_kth(std::uint64_t k, std::uint64_t max_prime) {
  require(k >= 1, "PrimeSet::every_kth: k must be >= 1");
  const auto primes = primes_up_to(max_prime);
  std::vector<std::uint64_t> idx;
  for (std::uint64_t i = k; i <= primes.size(); i += k) idx.push_back(i);
  PrimeSet s = from_indices(Rule::every_kth, max_prime, primes, idx);
  s.k_ = k;
  return s;
}

PrimeSet PrimeSet::index_gap(unsigned depth, std::uint64_t start, std::uint64_t max_prime) {
  require(depth >= 1 && depth <= 4, "PrimeSet::index_gap: depth must be in 1..4");
  require(start >= 1, "PrimeSet::index_gap: start must be >= 1");
  const auto primes = primes_up_to(max_prime);
  std::vector<std::uint64_t> idx;
  for (std::uint64_t m = start;; ++m) {
    double v = static_cast<double>(m);
    bool defined = true;
    for (unsigned d = 0; d < depth; ++d) {
      if (v <= 0.0) {
        defined = false;
        break;
      }
      v = std::log(v);
    }
    std::uint64_t mult = 1;
    if (defined && v >= 1.0) mult = static_cast<std::uint64_t>(std::floor(v));
    const std::uint64_t i = m * mult;
    if (i > primes.size()) break;
    idx.push_back(i);
  }
  PrimeSet s = from_indices(Rule::index_gap, max_prime, primes, idx);
  s.depth_ = depth;
  s.start_ = start;
  return s;
}

bool PrimeSet::contains(std::uint64_t p) const {
  if (p <= max_prime_) return data_->bitmap[static_cast<std::size_t>(p)] != 0;
  switch (rule_) {
    case Rule::all:
      return true;
    case Rule::explicit_list:
      return false;
    default:
      throw InvalidArgument("PrimeSet: prime " + std::to_string(p) + " beyond materialized bound " +
                            std::to_string(max_prime_));
  }
}

std::string PrimeSet::describe() const {
  std::ostringstream os;
  switch (rule_) {
    case Rule::all:
      os << "all primes";
      break;
    case Rule::explicit_list:
      os << "explicit(" << data_->members.size() << " primes)";
      break;
    case Rule::every_kth:
      os << "every " << k_ << "th prime";
      break;
    case Rule::index_gap:
      os << "index-gap(depth=" << depth_ << ", start=" << start_ << ")";
      break;
  }
  return os.str();
}

std::uint32_t restricted_prime_count(std::uint64_t n, const PrimeSet& primes, bool multiplicity,
                                     const SpfTable& table) {
  const Factorization f = factorize(n, table);
  return multiplicity ? f.big_omega(primes) : f.small_omega(primes);
}

SegmentedFactorizer::SegmentedFactorizer(std::uint64_t hi) : hi_(hi) {
  require(hi >= 1, "SegmentedFactorizer: bound must be >= 1");
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;
  primes_ = primes_up_to(root);
}

}  // namespace mflab
