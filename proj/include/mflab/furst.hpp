#pragma once

// Empirical cylinder frequencies of f(n + .) and the product relation
// nu_{fg}(C) = 2^{-r} nu_g(C^2).

#include <cstdint>
#include <map>
#include <vector>

#include "mflab/multfun.hpp"

namespace mflab {

/// Pinned coordinates; an empty support is the full space.
struct Cylinder {
  std::map<std::int64_t, int> assignment;  // coordinate -> value in {-1, 0, +1}

  std::size_t support_size() const noexcept { return assignment.size(); }
  /// #{c : assignment(c) != 0}
  unsigned nonzero() const noexcept;
  /// Pointwise squared assignment.
  Cylinder squared() const;
  Cylinder shifted(std::int64_t by) const;
};

struct CylinderCount {
  std::uint64_t hits = 0;
  std::uint64_t window = 0;  // number of n scanned
  double frequency() const { return window ? static_cast<double>(hits) / static_cast<double>(window) : 0.0; }
};

/// Scan window n in [max(1, 1 - min coordinate), x]; requires
/// x + max coordinate <= table.limit().
CylinderCount cylinder_count(const FunctionSpec& f, const Cylinder& c, std::uint64_t x,
                             const SpfTable& table);
double cylinder_frequency(const FunctionSpec& f, const Cylinder& c, std::uint64_t x,
                          const SpfTable& table);

/// Every cylinder on the given support with values drawn from `alphabet`.
std::vector<Cylinder> all_cylinders(const std::vector<std::int64_t>& support,
                                    const std::vector<int>& alphabet);

struct ProductRelationResult {
  double max_deviation = 0.0;
  std::size_t worst = 0;  // index into the cylinder list
  std::vector<double> lhs, rhs;
};

/// max over the list of |freq_{fg}(C) - 2^{-r} freq_g(C^2)|. f must be
/// +-1-valued and g {0,1}-valued on the scanned range.
ProductRelationResult check_product_relation(const FunctionSpec& f, const FunctionSpec& g,
                                             const std::vector<Cylinder>& cylinders, std::uint64_t x,
                                             const SpfTable& table);

}  // namespace mflab
