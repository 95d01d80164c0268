#pragma once

// Named acceptance checks, shared by the acceptance binary and the
// `reproduce` subcommand.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mflab/arith.hpp"

namespace mflab {

using CheckParams = std::map<std::string, double>;

struct CheckResult {
  std::string name;
  int criterion = 0;
  bool pass = false;
  std::string measured;   // human-readable measured values
  std::string tolerance;  // the bounds that were applied
  std::string note;       // caveats (e.g. finite-scale substitutions)
  std::string timing;     // wall-clock measurements that enter the verdict
  double seconds = 0.0;
};

/// Lazily built shared inputs.
class CheckContext {
 public:
  explicit CheckContext(std::uint64_t sieve_limit = 2'100'000) : limit_(sieve_limit) {}
  explicit CheckContext(SpfTable table) : limit_(table.limit()), table_(std::move(table)) {}
  const SpfTable& table();

 private:
  std::uint64_t limit_;
  std::optional<SpfTable> table_;
};

struct CheckInfo {
  std::string name;
  int criterion;
  std::string summary;
  /// What a manifest `tolerance` overrides.
  std::string tolerance_meaning;
  double default_tolerance;
  std::function<CheckResult(CheckContext&, const CheckParams&, double tolerance)> run;
};

/// Criteria 1..10 in order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo& find_check(const std::string& name);

CheckResult run_check(const std::string& name, CheckContext& ctx, const CheckParams& params = {},
                      std::optional<double> tolerance = std::nullopt);

/// "[PASS]  1 hudson-classification  measured ... | tol: ..."; timings are
/// appended only when with_timing is set.
std::string format_result_line(const CheckResult& r, bool with_timing = true);

}  // namespace mflab
