#include <cmath>

#include "mflab/correl.hpp"
#include "mflab/fixed_sum.hpp"

namespace mflab::reference {

CorrelationResult correlation(const CorrelationSpec& spec, const SpfTable& table) {
  require(!spec.factors.empty() && spec.x >= 1, "reference::correlation: empty spec");
  const std::uint64_t lo = spec.start.value_or(default_window_start(spec.mode, spec.x));
  FixedSum re, im, w;
  for (std::uint64_t n = lo; n <= spec.x; ++n) {
    cplx t = 1.0;
    for (const auto& fa : spec.factors) {
      const cplx v = evaluate(fa.f, fa.a * n + fa.h, table);
      for (unsigned k = 0; k < fa.e; ++k) t *= v;
    }
    const double wt = mode_weight(spec.mode, n);
    re.add(t.real() * wt);
    im.add(t.imag() * wt);
    w.add(wt);
  }
  CorrelationResult r;
  r.value = cplx(re.value() / w.value(), im.value() / w.value());
  r.lo = lo;
  r.x = spec.x;
  r.total_weight = w.value();
  r.degenerate = is_degenerate(spec.factors);
  return r;
}

}  // namespace mflab::reference
