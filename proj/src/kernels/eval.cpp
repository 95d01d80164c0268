#include "kernels/kernels.hpp"

namespace mflab::kernels {

namespace {

constexpr std::int64_t kBlock = 1 << 14;

}  // namespace

void eval_int(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
              std::int8_t* out) {
  const auto len = static_cast<std::int64_t>(hi - lo + 1);
  const auto spf = table.entries();
  // Liouville without overrides only needs the parity of Omega(n).
  const bool plain_liouville = f.kind() == FunctionKind::liouville && f.overrides().empty();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < len; b += kBlock) {
    const std::int64_t end = std::min(len, b + kBlock);
    for (std::int64_t i = b; i < end; ++i) {
      std::uint64_t n = lo + static_cast<std::uint64_t>(i);
      int v = 1;
      if (plain_liouville) {
        while (n > 1) {
          n /= spf[n];
          v = -v;
        }
      } else {
        while (n > 1 && v != 0) {
          const std::uint32_t p = spf[n];
          std::uint32_t e = 0;
          do {
            n /= p;
            ++e;
          } while (n % p == 0);
          v *= f.prime_power_int(p, e);
        }
      }
      out[i] = static_cast<std::int8_t>(v);
    }
  }
}

void eval_complex(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                  const SpfTable& table, cplx* out) {
  const auto len = static_cast<std::int64_t>(hi - lo + 1);
  const auto spf = table.entries();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < len; b += kBlock) {
    const std::int64_t end = std::min(len, b + kBlock);
    for (std::int64_t i = b; i < end; ++i) {
      std::uint64_t n = lo + static_cast<std::uint64_t>(i);
      cplx v = 1.0;
      while (n > 1) {
        const std::uint32_t p = spf[n];
        std::uint32_t e = 0;
        do {
          n /= p;
          ++e;
        } while (n % p == 0);
        v *= f.prime_power(p, e);
      }
      out[i] = v;
    }
  }
}

}  // namespace mflab::kernels
