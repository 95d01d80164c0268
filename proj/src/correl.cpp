#include "mflab/correl.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mflab/fixed_sum.hpp"

namespace mflab {

std::string mode_name(AverageMode m) {
  switch (m) {
    case AverageMode::cesaro:
      return "cesaro";
    case AverageMode::log:
      return "log";
    case AverageMode::loglog:
      return "loglog";
  }
  return "?";
}

AverageMode mode_from_name(const std::string& s) {
  if (s == "cesaro") return AverageMode::cesaro;
  if (s == "log") return AverageMode::log;
  if (s == "loglog") return AverageMode::loglog;
  throw InvalidArgument("unknown averaging mode: " + s + " (cesaro, log, loglog)");
}

std::uint64_t default_window_start(AverageMode m, std::uint64_t x) {
  const auto dx = static_cast<double>(x);
  switch (m) {
    case AverageMode::cesaro:
      return 1;
    case AverageMode::log: {
      auto r = static_cast<std::uint64_t>(std::sqrt(dx));
      while (r * r < x) ++r;
      while (r > 1 && (r - 1) * (r - 1) >= x) --r;
      return std::max<std::uint64_t>(1, r);
    }
    case AverageMode::loglog: {
      if (x < 16) return 3;
      const double ll = std::log(std::log(dx));
      const auto s = static_cast<std::uint64_t>(std::ceil(std::pow(dx, 1.0 / ll)));
      return std::max<std::uint64_t>(3, s);
    }
  }
  return 1;
}

double mode_weight(AverageMode m, std::uint64_t n) {
  switch (m) {
    case AverageMode::cesaro:
      return 1.0;
    case AverageMode::log:
      return 1.0 / static_cast<double>(n);
    case AverageMode::loglog: {
      const auto dn = static_cast<double>(n);
      return 1.0 / (dn * std::log(dn));
    }
  }
  return 1.0;
}

bool is_degenerate(const std::vector<CorrelationFactor>& factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      if (factors[i].a * factors[j].h == factors[j].a * factors[i].h) return true;
    }
  }
  return false;
}

namespace {

struct Acc {
  FixedSum re, im, w;
  Acc& operator+=(const Acc& o) {
    re += o.re;
    im += o.im;
    w += o.w;
    return *this;
  }
};

std::uint64_t window_lo(const CorrelationSpec& spec, std::uint64_t x) {
  std::uint64_t lo = spec.start.value_or(default_window_start(spec.mode, x));
  if (spec.mode == AverageMode::loglog) {
    require(lo >= 2, "loglog averages need a window start >= 2");
  }
  require(lo >= 1 && lo <= x, "correlation window start " + std::to_string(lo) + " exceeds x=" +
                                  std::to_string(x));
  return lo;
}

void validate(const CorrelationSpec& spec, std::uint64_t x_max, const SpfTable& table) {
  require(!spec.factors.empty(), "correlation: need at least one factor");
  for (const auto& fa : spec.factors) {
    require(fa.a >= 1, "correlation: dilations must be >= 1");
    require(fa.e >= 1, "correlation: exponents must be >= 1");
    require(fa.a * x_max + fa.h <= table.limit(),
            "correlation: a*x + h = " + std::to_string(fa.a * x_max + fa.h) +
                " exceeds sieve limit " + std::to_string(table.limit()));
  }
}

// Values of every distinct function over the span its factors touch.
struct FactorValues {
  std::vector<ValueBuffer> buffers;
  std::vector<std::size_t> which;  // factor -> buffer
  bool integer = true;

  FactorValues(const std::vector<CorrelationFactor>& factors, std::uint64_t lo, std::uint64_t hi,
               const SpfTable& table) {
    std::map<std::string, std::size_t> seen;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
    std::vector<const FunctionSpec*> fns;
    for (const auto& fa : factors) {
      const auto key = to_json(fa.f);
      const std::uint64_t a = fa.a * lo + fa.h;
      const std::uint64_t b = fa.a * hi + fa.h;
      auto it = seen.find(key);
      if (it == seen.end()) {
        it = seen.emplace(key, spans.size()).first;
        spans.emplace_back(a, b);
        fns.push_back(&fa.f);
      } else {
        auto& s = spans[it->second];
        s.first = std::min(s.first, a);
        s.second = std::max(s.second, b);
      }
      which.push_back(it->second);
    }
    for (std::size_t i = 0; i < fns.size(); ++i) {
      buffers.push_back(evaluate_range(*fns[i], spans[i].first, spans[i].second, table));
      integer = integer && buffers.back().is_integer();
    }
  }
};

int ipow_int(int v, unsigned e) {
  if (v == 0) return 0;
  if (v == 1) return 1;
  return (e & 1) ? -1 : 1;
}

cplx ipow_c(cplx v, unsigned e) {
  cplx r = 1.0;
  for (unsigned i = 0; i < e; ++i) r *= v;
  return r;
}

Acc accumulate(const CorrelationSpec& spec, const FactorValues& fv, std::uint64_t lo,
               std::uint64_t hi) {
  const auto& fs = spec.factors;
  const AverageMode mode = spec.mode;
  if (fv.integer) {
    return parallel_accumulate<Acc>(lo, hi, [&](std::uint64_t n, Acc& acc) {
      int t = 1;
      for (std::size_t j = 0; j < fs.size() && t != 0; ++j) {
        const auto& buf = fv.buffers[fv.which[j]];
        t *= ipow_int(buf.ints()[fs[j].a * n + fs[j].h - buf.base], fs[j].e);
      }
      if (mode == AverageMode::cesaro) {
        acc.re.add_int(t);
        acc.w.add_int(1);
      } else {
        const double w = mode_weight(mode, n);
        if (t != 0) acc.re.add(t * w);
        acc.w.add(w);
      }
    });
  }
  return parallel_accumulate<Acc>(lo, hi, [&](std::uint64_t n, Acc& acc) {
    cplx t = 1.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const auto& buf = fv.buffers[fv.which[j]];
      const std::size_t i = fs[j].a * n + fs[j].h - buf.base;
      const cplx v = buf.is_integer() ? cplx(buf.ints()[i]) : buf.complexes()[i];
      t *= ipow_c(v, fs[j].e);
    }
    const double w = mode_weight(mode, n);
    acc.re.add(t.real() * w);
    acc.im.add(t.imag() * w);
    acc.w.add(w);
  });
}

CorrelationResult finish(const CorrelationSpec& spec, const Acc& acc, std::uint64_t lo,
                         std::uint64_t x) {
  CorrelationResult r;
  const double w = acc.w.value();
  r.value = cplx(acc.re.value() / w, acc.im.value() / w);
  r.lo = lo;
  r.x = x;
  r.total_weight = w;
  r.degenerate = is_degenerate(spec.factors);
  if (r.degenerate) {
    r.annotation = spec.nondegenerate ? "degenerate: a_i h_j = a_j h_i for some i != j (flagged nondegenerate)"
                                      : "degenerate: a_i h_j = a_j h_i for some i != j";
  }
  return r;
}

}  // namespace

CorrelationResult correlation(const CorrelationSpec& spec, const SpfTable& table) {
  require(spec.x >= 1, "correlation: x must be >= 1");
  validate(spec, spec.x, table);
  const std::uint64_t lo = window_lo(spec, spec.x);
  const FactorValues fv(spec.factors, lo, spec.x, table);
  return finish(spec, accumulate(spec, fv, lo, spec.x), lo, spec.x);
}

std::vector<CorrelationResult> correlation_scan(const CorrelationSpec& spec,
                                                const std::vector<std::uint64_t>& xs,
                                                const SpfTable& table) {
  if (xs.empty()) return {};
  require(std::all_of(xs.begin(), xs.end(), [](auto v) { return v >= 1; }),
          "correlation_scan: grid points must be >= 1");
  const std::uint64_t x_max = *std::max_element(xs.begin(), xs.end());
  validate(spec, x_max, table);
  std::vector<std::uint64_t> los;
  for (std::uint64_t x : xs) los.push_back(window_lo(spec, x));
  const std::uint64_t global_lo = *std::min_element(los.begin(), los.end());
  const FactorValues fv(spec.factors, global_lo, x_max, table);

  // Prefix sums P(b) = sum over [global_lo, b] at every window boundary.
  std::vector<std::uint64_t> bounds;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bounds.push_back(xs[i]);
    bounds.push_back(los[i] - 1);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  std::map<std::uint64_t, Acc> prefix;
  Acc run;
  std::uint64_t done = global_lo - 1;
  for (std::uint64_t b : bounds) {
    if (b > done) {
      run += accumulate(spec, fv, done + 1, b);
      done = b;
    }
    prefix[b] = run;
  }
  std::vector<CorrelationResult> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Acc& hi = prefix.at(xs[i]);
    const Acc& lo = prefix.at(los[i] - 1);
    Acc diff;
    diff.re = hi.re - lo.re;
    diff.im = hi.im - lo.im;
    diff.w = hi.w - lo.w;
    out.push_back(finish(spec, diff, los[i], xs[i]));
  }
  return out;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, double ratio) {
  require(lo >= 1 && lo <= hi, "geometric_grid: need 1 <= lo <= hi");
  require(ratio > 1.0, "geometric_grid: ratio must exceed 1");
  std::vector<std::uint64_t> out;
  for (int k = 0;; ++k) {
    const double v = std::floor(static_cast<double>(lo) * std::pow(ratio, k) + 1e-9);
    if (v > static_cast<double>(hi)) break;
    const auto u = static_cast<std::uint64_t>(v);
    if (out.empty() || out.back() != u) out.push_back(u);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

cplx window_correlation(const std::vector<CorrelationFactor>& factors, std::uint64_t lo,
                        std::uint64_t hi, const SegmentedFactorizer& factorizer) {
  require(!factors.empty(), "window_correlation: need at least one factor");
  require(lo >= 1 && lo <= hi, "window_correlation: need 1 <= lo <= hi");
  std::vector<std::vector<cplx>> vals;
  for (const auto& fa : factors) {
    require(fa.a >= 1 && fa.e >= 1, "window_correlation: need a >= 1 and e >= 1");
    vals.push_back(evaluate_window(fa.f, fa.a * lo + fa.h, fa.a * hi + fa.h, factorizer));
  }
  const Acc acc = parallel_accumulate<Acc>(lo, hi, [&](std::uint64_t n, Acc& a) {
    cplx t = 1.0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      t *= ipow_c(vals[j][static_cast<std::size_t>(factors[j].a * (n - lo))], factors[j].e);
    }
    a.re.add(t.real());
    a.im.add(t.imag());
    a.w.add_int(1);
  });
  const double w = acc.w.value();
  return {acc.re.value() / w, acc.im.value() / w};
}

namespace {

template <typename Pred>
DensityEstimate density_impl(Pred&& pred, AverageMode mode, std::uint64_t x,
                             std::optional<std::uint64_t> start) {
  require(x >= 1, "density: x must be >= 1");
  const std::uint64_t lo = start.value_or(default_window_start(mode, x));
  require(lo >= 1 && lo <= x, "density: window start exceeds x");
  if (mode == AverageMode::loglog) require(lo >= 2, "density: loglog windows need start >= 2");
  const Acc acc = parallel_accumulate<Acc>(lo, x, [&](std::uint64_t n, Acc& a) {
    if (mode == AverageMode::cesaro) {
      a.w.add_int(1);
      if (pred(n)) a.re.add_int(1);
    } else {
      const double w = mode_weight(mode, n);
      a.w.add(w);
      if (pred(n)) a.re.add(w);
    }
  });
  return {mode, lo, x, acc.re.value() / acc.w.value()};
}

}  // namespace

DensityEstimate density(const Indicator& in_set, AverageMode mode, std::uint64_t x,
                        std::optional<std::uint64_t> start) {
  return density_impl([&](std::uint64_t n) { return in_set(n); }, mode, x, start);
}

DensityEstimate density(std::span<const std::uint8_t> mask, AverageMode mode, std::uint64_t x,
                        std::optional<std::uint64_t> start) {
  require(x <= mask.size(), "density: x exceeds the indicator mask");
  return density_impl([&](std::uint64_t n) { return mask[n - 1] != 0; }, mode, x, start);
}

std::vector<DensitySeriesPoint> density_series(std::span<const std::uint8_t> mask, AverageMode mode,
                                               const std::vector<std::uint64_t>& xs) {
  std::vector<DensitySeriesPoint> out;
  double sup = -1.0, inf = 2.0;
  for (std::uint64_t x : xs) {
    const auto est = density(mask, mode, x);
    sup = std::max(sup, est.value);
    inf = std::min(inf, est.value);
    out.push_back({est, sup, inf});
  }
  return out;
}

double decoupling_discrepancy(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t h1,
                              std::uint64_t h2, std::uint64_t P_cap, std::uint64_t x,
                              const SpfTable& table) {
  require(h1 != h2, "decoupling_discrepancy: need h1 != h2");
  require(P_cap >= 2, "decoupling_discrepancy: need P_cap >= 2");
  require(x >= 1, "decoupling_discrepancy: x must be >= 1");
  const std::uint64_t hmax = std::max(h1, h2);
  const auto primes = primes_up_to(P_cap);
  for (std::uint64_t p : primes) {
    require(x + p * hmax <= table.limit() && p * (x / p + hmax) <= table.limit(),
            "decoupling_discrepancy: x + p*h exceeds sieve limit");
  }
  const std::uint64_t top = x + primes.back() * hmax;
  const ValueBuffer fv = evaluate_range(f, 1, top, table);
  const ValueBuffer gv = evaluate_range(g, 1, top, table);
  auto val = [](const ValueBuffer& b, std::uint64_t n) {
    return b.is_integer() ? cplx(b.ints()[n - 1]) : b.complexes()[n - 1];
  };
  auto average = [&](std::uint64_t count, auto&& term) {
    const Acc acc = parallel_accumulate<Acc>(1, count, [&](std::uint64_t n, Acc& a) {
      const cplx t = term(n);
      a.re.add(t.real());
      a.im.add(t.imag());
    });
    return cplx(acc.re.value(), acc.im.value()) / static_cast<double>(count);
  };
  FixedSum num, den;
  for (std::uint64_t p : primes) {
    const cplx shifted = average(x, [&](std::uint64_t n) { return val(fv, n + p * h1) * val(gv, n + p * h2); });
    const std::uint64_t xp = x / p;
    cplx dilated = 0.0;
    if (xp >= 1) {
      dilated = average(xp, [&](std::uint64_t n) { return val(fv, p * (n + h1)) * val(gv, p * (n + h2)); });
    }
    const double w = 1.0 / static_cast<double>(p);
    num.add(w * std::abs(shifted - dilated));
    den.add(w);
  }
  return num.value() / den.value();
}

}  // namespace mflab
