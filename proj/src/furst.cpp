#include "mflab/furst.hpp"

#include <algorithm>
#include <cmath>

#include "mflab/fixed_sum.hpp"

namespace mflab {

unsigned Cylinder::nonzero() const noexcept {
  unsigned r = 0;
  for (const auto& [c, v] : assignment) r += v != 0;
  return r;
}

Cylinder Cylinder::squared() const {
  Cylinder out;
  for (const auto& [c, v] : assignment) out.assignment[c] = v * v;
  return out;
}

Cylinder Cylinder::shifted(std::int64_t by) const {
  Cylinder out;
  for (const auto& [c, v] : assignment) out.assignment[c + by] = v;
  return out;
}

namespace {

struct Count {
  std::uint64_t hits = 0;
  Count& operator+=(const Count& o) {
    hits += o.hits;
    return *this;
  }
};

struct Window {
  std::uint64_t n0, lo, hi;  // n range [n0, x]; values needed on [lo, hi]
};

Window window_for(const std::vector<const Cylinder*>& cs, std::uint64_t x, const SpfTable& table) {
  std::int64_t cmin = 0, cmax = 0;
  for (const auto* c : cs) {
    for (const auto& [k, v] : c->assignment) {
      require(v >= -1 && v <= 1, "cylinder values must lie in {-1, 0, +1}");
      cmin = std::min(cmin, k);
      cmax = std::max(cmax, k);
    }
  }
  const std::uint64_t n0 = cmin < 0 ? static_cast<std::uint64_t>(1 - cmin) : 1;
  require(x >= n0, "cylinder scan: x too small for the support");
  require(x + static_cast<std::uint64_t>(cmax) <= table.limit(),
          "cylinder scan: x + max coordinate exceeds sieve limit " + std::to_string(table.limit()));
  return {n0, static_cast<std::uint64_t>(static_cast<std::int64_t>(n0) + cmin),
          x + static_cast<std::uint64_t>(cmax)};
}

std::vector<int> int_values(const FunctionSpec& f, const Window& w, const SpfTable& table) {
  require(f.integer_valued(), "cylinder frequencies need an integer-valued function");
  const ValueBuffer b = evaluate_range(f, w.lo, w.hi, table);
  return {b.ints().begin(), b.ints().end()};
}

std::uint64_t count_hits(const std::vector<int>& vals, std::uint64_t base, const Cylinder& c,
                         std::uint64_t n0, std::uint64_t x) {
  std::vector<std::pair<std::int64_t, int>> pins(c.assignment.begin(), c.assignment.end());
  if (pins.empty()) return x - n0 + 1;
  return parallel_accumulate<Count>(n0, x, [&](std::uint64_t n, Count& acc) {
           for (const auto& [k, v] : pins) {
             if (vals[static_cast<std::size_t>(static_cast<std::int64_t>(n - base) + k)] != v) return;
           }
           ++acc.hits;
         }).hits;
}

}  // namespace

CylinderCount cylinder_count(const FunctionSpec& f, const Cylinder& c, std::uint64_t x,
                             const SpfTable& table) {
  const Window w = window_for({&c}, x, table);
  const auto vals = int_values(f, w, table);
  return {count_hits(vals, w.lo, c, w.n0, x), x - w.n0 + 1};
}

double cylinder_frequency(const FunctionSpec& f, const Cylinder& c, std::uint64_t x,
                          const SpfTable& table) {
  return cylinder_count(f, c, x, table).frequency();
}

std::vector<Cylinder> all_cylinders(const std::vector<std::int64_t>& support,
                                    const std::vector<int>& alphabet) {
  require(!alphabet.empty(), "all_cylinders: empty alphabet");
  std::vector<Cylinder> out;
  std::vector<std::size_t> digit(support.size(), 0);
  while (true) {
    Cylinder c;
    for (std::size_t i = 0; i < support.size(); ++i) c.assignment[support[i]] = alphabet[digit[i]];
    require(c.assignment.size() == support.size(), "all_cylinders: repeated coordinate");
    out.push_back(std::move(c));
    std::size_t i = support.size();
    while (i > 0 && ++digit[i - 1] == alphabet.size()) digit[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

ProductRelationResult check_product_relation(const FunctionSpec& f, const FunctionSpec& g,
                                             const std::vector<Cylinder>& cylinders, std::uint64_t x,
                                             const SpfTable& table) {
  ProductRelationResult r;
  if (cylinders.empty()) return r;
  std::vector<const Cylinder*> ptrs;
  for (const auto& c : cylinders) ptrs.push_back(&c);
  const Window w = window_for(ptrs, x, table);
  const auto fv = int_values(f, w, table);
  const auto gv = int_values(g, w, table);
  std::vector<int> fg(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) {
    require(fv[i] == 1 || fv[i] == -1, "check_product_relation: f must be +-1-valued");
    require(gv[i] == 0 || gv[i] == 1, "check_product_relation: g must be {0,1}-valued");
    fg[i] = fv[i] * gv[i];
  }
  const double window = static_cast<double>(x - w.n0 + 1);
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    const Cylinder& c = cylinders[i];
    const double lhs = static_cast<double>(count_hits(fg, w.lo, c, w.n0, x)) / window;
    const double rhs = std::ldexp(static_cast<double>(count_hits(gv, w.lo, c.squared(), w.n0, x)) / window,
                                  -static_cast<int>(c.nonzero()));
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    const double dev = std::abs(lhs - rhs);
    if (dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst = i;
    }
  }
  return r;
}

}  // namespace mflab
