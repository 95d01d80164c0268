#include "mflab/multfun.hpp"

namespace mflab::reference {

ValueBuffer evaluate_range(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                           const SpfTable& table) {
  require(lo >= 1 && lo <= hi, "reference::evaluate_range: need 1 <= lo <= hi");
  require(hi <= table.limit(), "reference::evaluate_range: hi exceeds sieve limit");
  // Fill 1..hi in increasing n: n = p^e * r with p = spf(n), gcd(p, r) = 1,
  // so f(n) = f(p^e) f(r) with r < n already known.
  std::vector<cplx> all(static_cast<std::size_t>(hi) + 1);
  all[1] = 1.0;
  for (std::uint64_t n = 2; n <= hi; ++n) {
    const std::uint64_t p = table.spf(n);
    std::uint64_t r = n;
    std::uint32_t e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    all[n] = f.prime_power(p, e) * all[r];
  }
  ValueBuffer out;
  out.base = lo;
  if (f.integer_valued()) {
    std::vector<std::int8_t> v;
    for (std::uint64_t n = lo; n <= hi; ++n) v.push_back(static_cast<std::int8_t>(all[n].real()));
    out.values = std::move(v);
  } else {
    out.values = std::vector<cplx>(all.begin() + static_cast<std::ptrdiff_t>(lo), all.end());
  }
  return out;
}

}  // namespace mflab::reference
