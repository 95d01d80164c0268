#include "mflab/hudson.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace mflab {

namespace {

constexpr std::uint64_t kMaxPrimeModulus = 197;

std::uint64_t ceil_mul(double a, std::uint64_t b) {
  return static_cast<std::uint64_t>(std::ceil(a * static_cast<double>(b)));
}

}  // namespace

int HudsonCandidate::value(std::uint64_t n) const {
  require(n >= 1, "hudson candidate: n must be >= 1");
  int v = 1;
  while (n % 2 == 0) {
    n /= 2;
    v *= f2;
  }
  while (n % 3 == 0) {
    n /= 3;
    v *= f3;
  }
  if (prime_modulus()) {
    while (n % m == 0) {
      n /= m;
      v *= fp0;
    }
  }
  return v * chi.value(n);
}

FunctionSpec HudsonCandidate::function() const {
  std::map<std::uint64_t, int> ov{{2, f2}, {3, f3}};
  if (prime_modulus()) ov[m] = fp0;
  return FunctionSpec::modified_character(chi, ov);
}

std::string HudsonCandidate::label() const {
  std::ostringstream os;
  os << "m=" << m << " " << chi.id() << " f(2)=" << f2 << " f(3)=" << f3;
  if (prime_modulus()) os << " f(" << m << ")=" << fp0;
  return os.str();
}

std::vector<HudsonCandidate> hudson_candidates() {
  std::vector<RealCharacter> chars{principal_character(1), real_primitive_character(3),
                                   real_primitive_character(4),
                                   real_primitive_character(8, Mod8Choice::chi8),
                                   real_primitive_character(8, Mod8Choice::psi8)};
  for (std::uint64_t p : primes_up_to(kMaxPrimeModulus - 1)) {
    if (p > 3) chars.push_back(real_primitive_character(p));
  }
  std::vector<HudsonCandidate> out;
  for (const auto& chi : chars) {
    const std::uint64_t m = chi.modulus();
    for (int f2 : {1, -1}) {
      for (int f3 : {1, -1}) {
        HudsonCandidate c{m, chi, f2, f3, 0};
        if (c.prime_modulus()) {
          for (int fp : {1, -1}) {
            c.fp0 = fp;
            out.push_back(c);
          }
        } else {
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

std::int64_t jacobi_sum(std::uint64_t p0) {
  require(p0 > 2 && is_prime_u64(p0), "jacobi_sum: p0 must be an odd prime");
  const auto leg = legendre_table(p0);
  std::int64_t s = 0;
  for (std::uint64_t d = 0; d < p0; ++d) s += leg[(d * ((1 + p0 - d) % p0)) % p0];
  return s;
}

std::int64_t char_sum_xi(std::uint64_t p0, const std::vector<int>& S) {
  require(p0 > 3 && is_prime_u64(p0), "char_sum_xi: p0 must be a prime > 3");
  require(!S.empty() && S.size() <= 4, "char_sum_xi: S must be a nonempty subset of {1,2,3,4}");
  for (std::size_t i = 0; i < S.size(); ++i) {
    require(S[i] >= 1 && S[i] <= 4, "char_sum_xi: S must lie in {1,2,3,4}");
    for (std::size_t j = 0; j < i; ++j) require(S[i] != S[j], "char_sum_xi: repeated element in S");
  }
  const auto leg = legendre_table(p0);
  std::int64_t s = 0;
  for (std::uint64_t a = 1; a <= p0; ++a) {
    std::uint64_t prod = 1;
    for (int j : S) prod = prod * ((36 * a + static_cast<std::uint64_t>(j)) % p0) % p0;
    s += leg[prod];
  }
  return s;
}

ModulusBoundReport modulus_bound_report(std::uint64_t p0) {
  std::int64_t rhs = 32;
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<int> S;
    for (int j = 1; j <= 4; ++j) {
      if (mask & (1u << (j - 1))) S.push_back(j);
    }
    rhs += std::llabs(char_sum_xi(p0, S));
  }
  const double weil = 38.0 + 11.0 * std::sqrt(static_cast<double>(p0));
  return {p0, rhs, static_cast<std::int64_t>(p0) > rhs, weil, static_cast<double>(rhs) <= weil};
}

std::optional<std::uint64_t> criterion_search(std::uint64_t p0, int fchi2, int fchi3) {
  require(p0 > 3 && is_prime_u64(p0), "criterion_search: p0 must be a prime > 3");
  require(std::abs(fchi2) == 1 && std::abs(fchi3) == 1, "criterion_search: values must be +-1");
  const auto leg = legendre_table(p0);
  const int fchi[5] = {0, 1, fchi2, fchi3, 1};  // f(1)(1/p0) = f(4)(4/p0) = 1
  const std::uint64_t p3 = p0 * p0 * p0;
  for (std::uint64_t n = 1; 24 * n + 4 < p3; ++n) {
    std::int64_t prod = 1;
    for (std::uint64_t j = 1; j <= 4 && prod != 0; ++j) {
      prod *= 1 + fchi[j] * leg[(24 * n + j) % p0];
    }
    if (prod > 0) return n;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> criterion_search(const HudsonCandidate& c) {
  require(c.prime_modulus(), "criterion_search: candidate modulus must be a prime > 3");
  return criterion_search(c.m, c.fchi2(), c.fchi3());
}

std::optional<std::uint64_t> direct_pattern_witness(const HudsonCandidate& c, std::uint64_t cap) {
  require(cap >= 1, "direct_pattern_witness: cap must be >= 1");
  int run = 0;  // consecutive +1 values ending at the current n
  for (std::uint64_t n = 1; n <= cap + 3; ++n) {
    run = c.value(n) == 1 ? run + 1 : 0;
    if (run >= 4) return n - 3;
  }
  return std::nullopt;
}

std::string status_name(HudsonStatus s) {
  switch (s) {
    case HudsonStatus::member:
      return "member";
    case HudsonStatus::excluded_by_criterion:
      return "excluded-by-criterion";
    case HudsonStatus::excluded_by_witness:
      return "excluded-by-witness";
    case HudsonStatus::length_two:
      return "length-two";
  }
  return "?";
}

bool is_listed_member(const HudsonCandidate& c) {
  if (c.m == 1) return c.f2 == -1 && c.f3 == 1;  // g_3
  if (c.m == 4) return c.f3 == -1;                // g_1, g_2
  if (c.prime_modulus()) {
    const bool listed = c.m == 5 || c.m == 7 || c.m == 11 || c.m == 13 || c.m == 53;
    return listed && c.fchi2() == 1 && c.fchi3() == 1;  // f_p^{+-}
  }
  return false;
}

std::vector<ClassificationRow> enumerate_all_candidates(const ClassificationOptions& opt) {
  const auto cands = hudson_candidates();
  std::vector<ClassificationRow> rows(cands.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(cands.size()); ++i) {
    const HudsonCandidate& c = cands[static_cast<std::size_t>(i)];
    ClassificationRow& r = rows[static_cast<std::size_t>(i)];
    r.candidate = c;
    r.bound = opt.witness_cap;
    if (c.m == 3 && c.f2 == -1) {
      // f_3^{+-}: (+1,+1,+1) never occurs, so they sit in the length-two class
      r.status = HudsonStatus::length_two;
      continue;
    }
    if (c.prime_modulus()) {
      const std::uint64_t p3 = c.m * c.m * c.m;
      if (auto n = criterion_search(c)) {
        r.status = HudsonStatus::excluded_by_criterion;
        r.witness = n;
        r.bound = (p3 - 5) / 24;  // largest n with 24n + 4 < p0^3
        r.mismatch = is_listed_member(c);
        if (opt.deep_verify) {
          r.deep_witness = direct_pattern_witness(c, ceil_mul(1.05, p3));
          r.mismatch = r.mismatch || !r.deep_witness.has_value();
        }
        continue;
      }
    }
    if (auto n = direct_pattern_witness(c, opt.witness_cap)) {
      r.status = HudsonStatus::excluded_by_witness;
      r.witness = n;
    } else {
      r.status = HudsonStatus::member;
    }
    r.mismatch = r.mismatch || (r.status == HudsonStatus::member) != is_listed_member(c);
  }
  return rows;
}

std::string classification_csv(const std::vector<ClassificationRow>& rows) {
  std::ostringstream os;
  os << "modulus,character,f2,f3,fp0,status,witness_n,bound_used\n";
  for (const auto& r : rows) {
    const auto& c = r.candidate;
    os << c.m << ',' << c.chi.id() << ',' << c.f2 << ',' << c.f3 << ',';
    if (c.prime_modulus()) os << c.fp0;
    os << ',' << status_name(r.status) << ',';
    if (r.witness) os << *r.witness;
    os << ',' << r.bound << '\n';
  }
  return os.str();
}

std::string classification_summary_json(const std::vector<ClassificationRow>& rows) {
  std::size_t members = 0, excluded = 0, length_two = 0, mismatches = 0;
  for (const auto& r : rows) {
    members += r.status == HudsonStatus::member;
    excluded += r.status == HudsonStatus::excluded_by_criterion || r.status == HudsonStatus::excluded_by_witness;
    length_two += r.status == HudsonStatus::length_two;
    mismatches += r.mismatch;
  }
  nlohmann::ordered_json j;
  j["members"] = members;
  j["excluded"] = excluded;
  j["length_two"] = length_two;
  j["mismatches"] = mismatches;
  j["candidates"] = rows.size();
  return j.dump();
}

}  // namespace mflab
