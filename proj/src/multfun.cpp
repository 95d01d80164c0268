#include "mflab/multfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kernels/kernels.hpp"

namespace mflab {

using json = nlohmann::json;

struct FunctionSpec::Node {
  FunctionKind kind = FunctionKind::constant_one;
  std::optional<PrimeSet> primes;
  RealCharacter chi;
  double t = 0.0;
  std::shared_ptr<const MrtConstruction> mrt;
  std::vector<FunctionSpec> children;
  unsigned exponent = 1;
  std::map<std::uint64_t, cplx> overrides;
};

namespace {

const std::pair<FunctionKind, const char*> kKindNames[] = {
    {FunctionKind::constant_one, "constant-one"},
    {FunctionKind::liouville, "liouville"},
    {FunctionKind::moebius, "moebius"},
    {FunctionKind::liouville_like_big_omega, "liouville-like-Omega"},
    {FunctionKind::liouville_like_small_omega, "liouville-like-omega"},
    {FunctionKind::real_character, "real-character"},
    {FunctionKind::modified_character, "modified-character"},
    {FunctionKind::archimedean_twist, "archimedean-twist"},
    {FunctionKind::mrt, "mrt"},
    {FunctionKind::pointwise_product, "pointwise-product"},
    {FunctionKind::conjugate, "conjugate"},
    {FunctionKind::power, "power"},
};

bool is_unit_int(cplx v) {
  return v.imag() == 0.0 && (v.real() == 1.0 || v.real() == -1.0 || v.real() == 0.0);
}

cplx ipow(cplx v, std::uint32_t e) {
  cplx r = 1.0;
  for (std::uint32_t i = 0; i < e; ++i) r *= v;
  return r;
}

int ipow(int v, std::uint32_t e) {
  if (v == 0) return 0;
  if (v == 1) return 1;
  return (e & 1) ? -1 : 1;
}

}  // namespace

std::string kind_name(FunctionKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

FunctionKind kind_from_name(const std::string& name) {
  for (const auto& [kind, n] : kKindNames) {
    if (name == n) return kind;
  }
  throw InvalidArgument("unknown function kind: " + name);
}

cplx MrtConstruction::prime_value(std::uint64_t p) const {
  const double s = twist_for(p);
  if (s == 0.0) return 1.0;
  return std::polar(1.0, s * std::log(static_cast<double>(p)));
}

double MrtConstruction::twist_for(std::uint64_t p) const {
  const auto x = static_cast<double>(p);
  for (const auto& st : stages) {
    if (x <= st.t_hi) return st.s;
  }
  return stages.back().s;
}

MrtTwist mrt_find_twist(const MrtConstruction& state, double epsilon) {
  require(!state.stages.empty(), "mrt_find_twist: construction has no stages");
  require(epsilon > 0.0, "mrt_find_twist: epsilon must be positive");
  const MrtParams& prm = state.params;
  require(prm.grid_step > 0.0, "mrt_find_twist: grid step must be positive");
  const double tm = state.stages.back().t_hi;
  const double thr = std::exp(tm);
  if (!std::isfinite(thr) || thr + prm.grid_step == thr) {
    throw BudgetExceeded("mrt_find_twist: threshold exp(" + std::to_string(tm) +
                             ") is beyond double-precision grid search",
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::infinity());
  }
  const auto primes = primes_up_to(static_cast<std::uint64_t>(std::floor(tm)));
  require(!primes.empty(), "mrt_find_twist: need t_m >= 2");
  std::vector<double> logs;
  std::vector<cplx> target;
  for (std::uint32_t p : primes) {
    logs.push_back(std::log(static_cast<double>(p)));
    target.push_back(state.prime_value(p));
  }
  auto deviation = [&](double s, double stop) {
    double worst = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      worst = std::max(worst, std::abs(std::polar(1.0, s * logs[i]) - target[i]));
      if (worst > stop) break;
    }
    return worst;
  };

  const double h = prm.grid_step;
  MrtTwist best{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
  if (epsilon >= 2.0) {
    const double s = thr + h;
    return {s, deviation(s, 2.0)};
  }
  // Only grid points where the p = 2 condition holds can qualify:
  // dist(s log 2 - theta, 2 pi Z) <= a with a = 2 asin(eps / 2).
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double L2 = logs[0];
  const double theta = std::arg(target[0]);
  const double a = 2.0 * std::asin(epsilon / 2.0) + 1e-9;
  auto k = static_cast<std::int64_t>(std::floor((thr * L2 - theta - a) / two_pi));
  for (;; ++k) {
    const double lo = (theta + two_pi * static_cast<double>(k) - a) / L2;
    const double hi = (theta + two_pi * static_cast<double>(k) + a) / L2;
    if (lo - thr > prm.search_span) break;
    const auto j0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((lo - thr) / h)));
    const auto j1 = static_cast<std::int64_t>(std::floor((hi - thr) / h));
    for (std::int64_t j = j0; j <= j1; ++j) {
      const double s = thr + static_cast<double>(j) * h;
      const double d = deviation(s, std::min(best.deviation, 4.0));
      if (d <= epsilon) return {s, d};
      if (d < best.deviation) best = {s, d};
    }
  }
  throw BudgetExceeded("mrt_find_twist: no grid point within the search span", best.s,
                       best.deviation);
}

MrtConstruction build_mrt(const MrtParams& params) {
  require(params.M >= 2, "build_mrt: M must be >= 2");
  require(params.depth >= 1, "build_mrt: depth must be >= 1");
  require(params.growth_exponent >= 1.0, "build_mrt: growth exponent must be >= 1");
  MrtConstruction c;
  c.params = params;
  c.stages.push_back({0.0, static_cast<double>(params.M), 0.0, 0.0});
  for (unsigned d = 1; d < params.depth; ++d) {
    const double tm = c.stages.back().t_hi;
    const MrtTwist tw = mrt_find_twist(c, 1.0 / (tm * tm));
    c.stages.push_back({tm, std::pow(tw.s, params.growth_exponent), tw.s, tw.deviation});
  }
  return c;
}

namespace {

using NodePtr = std::shared_ptr<FunctionSpec::Node>;

}  // namespace

FunctionSpec FunctionSpec::one() {
  return FunctionSpec(std::make_shared<Node>());
}

FunctionSpec FunctionSpec::liouville() {
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::liouville;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::moebius() {
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::moebius;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::liouville_like(const PrimeSet& primes, bool multiplicity) {
  auto n = std::make_shared<Node>();
  n->kind = multiplicity ? FunctionKind::liouville_like_big_omega
                         : FunctionKind::liouville_like_small_omega;
  n->primes = primes;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::character(const RealCharacter& chi) {
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::real_character;
  n->chi = chi;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::modified_character(const RealCharacter& chi,
                                              const std::map<std::uint64_t, int>& overrides) {
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::modified_character;
  n->chi = chi;
  for (auto [p, v] : overrides) {
    require(is_prime_u64(p), "modified_character: override key " + std::to_string(p) + " is not prime");
    require(v == 1 || v == -1 || v == 0, "modified_character: override values must be in {-1,0,+1}");
    n->overrides[p] = static_cast<double>(v);
  }
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::twist(double t) {
  require(std::isfinite(t), "twist: t must be finite");
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::archimedean_twist;
  n->t = t;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::mrt(const MrtConstruction& c) {
  require(!c.stages.empty(), "mrt: construction has no stages");
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::mrt;
  n->mrt = std::make_shared<const MrtConstruction>(c);
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::product(std::vector<FunctionSpec> factors) {
  require(!factors.empty(), "product: need at least one factor");
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::pointwise_product;
  n->children = std::move(factors);
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::conjugate(const FunctionSpec& inner) {
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::conjugate;
  n->children = {inner};
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::power(const FunctionSpec& inner, unsigned e) {
  require(e >= 1, "power: exponent must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = FunctionKind::power;
  n->children = {inner};
  n->exponent = e;
  return FunctionSpec(n);
}

FunctionSpec FunctionSpec::modified_legendre(std::uint64_t p, int sign) {
  require(p >= 3 && is_prime_u64(p), "modified_legendre: p must be an odd prime");
  require(sign == 1 || sign == -1, "modified_legendre: sign must be +1 or -1");
  return modified_character(real_primitive_character(p), {{p, sign}});
}

FunctionSpec FunctionSpec::hudson_g(int which) {
  switch (which) {
    case 1:
      return modified_character(real_primitive_character(4), {{2, 1}});
    case 2:
      return modified_character(real_primitive_character(4), {{2, -1}});
    case 3:
      return modified_character(RealCharacter(), {{2, -1}});
    default:
      throw InvalidArgument("hudson_g: index must be 1, 2 or 3");
  }
}

FunctionSpec FunctionSpec::with_override(std::uint64_t p, cplx v) const {
  require(is_prime_u64(p), "with_override: " + std::to_string(p) + " is not prime");
  require(std::abs(v) <= 1.0 + 1e-12, "with_override: value must lie in the unit disc");
  auto n = std::make_shared<Node>(*node_);
  n->overrides[p] = v;
  return FunctionSpec(n);
}

FunctionKind FunctionSpec::kind() const noexcept { return node_->kind; }

bool FunctionSpec::complete() const noexcept {
  switch (node_->kind) {
    case FunctionKind::moebius:
    case FunctionKind::liouville_like_small_omega:
      return false;
    case FunctionKind::pointwise_product:
    case FunctionKind::conjugate:
    case FunctionKind::power:
      return std::all_of(node_->children.begin(), node_->children.end(),
                         [](const FunctionSpec& c) { return c.complete(); });
    default:
      return true;
  }
}

bool FunctionSpec::integer_valued() const noexcept {
  for (const auto& [p, v] : node_->overrides) {
    if (!is_unit_int(v)) return false;
  }
  switch (node_->kind) {
    case FunctionKind::archimedean_twist:
      return node_->t == 0.0;
    case FunctionKind::mrt:
      return node_->mrt->stages.size() == 1;
    case FunctionKind::pointwise_product:
    case FunctionKind::conjugate:
    case FunctionKind::power:
      return std::all_of(node_->children.begin(), node_->children.end(),
                         [](const FunctionSpec& c) { return c.integer_valued(); });
    default:
      return true;
  }
}

const std::map<std::uint64_t, cplx>& FunctionSpec::overrides() const noexcept {
  return node_->overrides;
}
const std::optional<PrimeSet>& FunctionSpec::prime_set() const noexcept { return node_->primes; }
const RealCharacter& FunctionSpec::character_param() const noexcept { return node_->chi; }
double FunctionSpec::twist_param() const noexcept { return node_->t; }
const MrtConstruction& FunctionSpec::mrt_param() const {
  require(node_->mrt != nullptr, "mrt_param: not an mrt function");
  return *node_->mrt;
}
const std::vector<FunctionSpec>& FunctionSpec::children() const noexcept { return node_->children; }
unsigned FunctionSpec::exponent() const noexcept { return node_->exponent; }

cplx FunctionSpec::prime_power(std::uint64_t p, std::uint32_t e) const {
  const Node& n = *node_;
  cplx base;
  switch (n.kind) {
    case FunctionKind::constant_one:
      base = 1.0;
      break;
    case FunctionKind::liouville:
      base = (e & 1) ? -1.0 : 1.0;
      break;
    case FunctionKind::moebius:
      base = e == 1 ? -1.0 : 0.0;
      break;
    case FunctionKind::liouville_like_big_omega:
      base = (n.primes->contains(p) && (e & 1)) ? -1.0 : 1.0;
      break;
    case FunctionKind::liouville_like_small_omega:
      base = n.primes->contains(p) ? -1.0 : 1.0;
      break;
    case FunctionKind::real_character:
    case FunctionKind::modified_character:
      base = static_cast<double>(ipow(n.chi.value(p), e));
      break;
    case FunctionKind::archimedean_twist:
      base = n.t == 0.0 ? cplx(1.0) : ipow(std::polar(1.0, n.t * std::log(static_cast<double>(p))), e);
      break;
    case FunctionKind::mrt: {
      const double s = n.mrt->twist_for(p);
      base = s == 0.0 ? cplx(1.0) : ipow(std::polar(1.0, s * std::log(static_cast<double>(p))), e);
      break;
    }
    case FunctionKind::pointwise_product:
      base = 1.0;
      for (const auto& c : n.children) base *= c.prime_power(p, e);
      break;
    case FunctionKind::conjugate:
      base = std::conj(n.children[0].prime_power(p, e));
      break;
    case FunctionKind::power:
      base = ipow(n.children[0].prime_power(p, e), n.exponent);
      break;
  }
  if (!n.overrides.empty()) {
    const auto it = n.overrides.find(p);
    if (it != n.overrides.end()) {
      if (complete()) return ipow(it->second, e);
      return base == 0.0 ? cplx(0.0) : it->second;
    }
  }
  return base;
}

int FunctionSpec::prime_power_int(std::uint64_t p, std::uint32_t e) const {
  const Node& n = *node_;
  int base = 1;
  switch (n.kind) {
    case FunctionKind::constant_one:
    case FunctionKind::archimedean_twist:
    case FunctionKind::mrt:
      base = 1;
      break;
    case FunctionKind::liouville:
      base = (e & 1) ? -1 : 1;
      break;
    case FunctionKind::moebius:
      base = e == 1 ? -1 : 0;
      break;
    case FunctionKind::liouville_like_big_omega:
      base = (n.primes->contains(p) && (e & 1)) ? -1 : 1;
      break;
    case FunctionKind::liouville_like_small_omega:
      base = n.primes->contains(p) ? -1 : 1;
      break;
    case FunctionKind::real_character:
    case FunctionKind::modified_character:
      base = ipow(n.chi.value(p), e);
      break;
    case FunctionKind::pointwise_product:
      for (const auto& c : n.children) base *= c.prime_power_int(p, e);
      break;
    case FunctionKind::conjugate:
      base = n.children[0].prime_power_int(p, e);
      break;
    case FunctionKind::power:
      base = n.children[0].prime_power_int(p, e);
      base = ipow(base, n.exponent);
      break;
  }
  if (!n.overrides.empty()) {
    const auto it = n.overrides.find(p);
    if (it != n.overrides.end()) {
      const int v = static_cast<int>(it->second.real());
      if (complete()) return ipow(v, e);
      return base == 0 ? 0 : v;
    }
  }
  return base;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_value(cplx v) {
  if (v.imag() == 0.0) {
    if (v.real() == 1.0) return "+1";
    if (v.real() == -1.0) return "-1";
    return fmt_double(v.real());
  }
  return "(" + fmt_double(v.real()) + "," + fmt_double(v.imag()) + ")";
}

}  // namespace

std::string FunctionSpec::describe() const {
  const Node& n = *node_;
  std::string s;
  switch (n.kind) {
    case FunctionKind::constant_one:
      s = "1";
      break;
    case FunctionKind::liouville:
      s = "liouville";
      break;
    case FunctionKind::moebius:
      s = "moebius";
      break;
    case FunctionKind::liouville_like_big_omega:
      s = "(-1)^Omega_P[P=" + n.primes->describe() + "]";
      break;
    case FunctionKind::liouville_like_small_omega:
      s = "(-1)^omega_P[P=" + n.primes->describe() + "]";
      break;
    case FunctionKind::real_character:
    case FunctionKind::modified_character:
      s = n.chi.id();
      break;
    case FunctionKind::archimedean_twist:
      s = "n^(i*" + fmt_double(n.t) + ")";
      break;
    case FunctionKind::mrt:
      s = "mrt(M=" + std::to_string(n.mrt->params.M) + ",depth=" +
          std::to_string(n.mrt->params.depth) + ",relaxed-growth g=" +
          fmt_double(n.mrt->params.growth_exponent) + ")";
      break;
    case FunctionKind::pointwise_product:
      s = "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += "*";
        s += n.children[i].describe();
      }
      s += ")";
      break;
    case FunctionKind::conjugate:
      s = "conj(" + n.children[0].describe() + ")";
      break;
    case FunctionKind::power:
      s = "(" + n.children[0].describe() + ")^" + std::to_string(n.exponent);
      break;
  }
  if (!n.overrides.empty()) {
    s += " [";
    bool first = true;
    for (const auto& [p, v] : n.overrides) {
      if (!first) s += ",";
      first = false;
      s += "f(" + std::to_string(p) + ")=" + fmt_value(v);
    }
    s += "]";
  }
  return s;
}

bool operator==(const FunctionSpec& a, const FunctionSpec& b) {
  return a.node_ == b.node_ || to_json(a) == to_json(b);
}

std::size_t ValueBuffer::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

cplx ValueBuffer::at(std::uint64_t n) const {
  require(n >= base && n - base < size(), "ValueBuffer::at: index outside buffer");
  const auto i = static_cast<std::size_t>(n - base);
  if (is_integer()) return static_cast<double>(ints()[i]);
  return complexes()[i];
}

namespace {

// Rule-based prime sets only know membership up to their materialized bound.
void check_domain(const FunctionSpec& f, std::uint64_t hi) {
  const auto& ps = f.prime_set();
  if (ps && (ps->rule() == PrimeSet::Rule::every_kth || ps->rule() == PrimeSet::Rule::index_gap)) {
    require(ps->max_prime() >= hi, "prime set materialized only up to " +
                                       std::to_string(ps->max_prime()) + ", need " +
                                       std::to_string(hi));
  }
  for (const auto& c : f.children()) check_domain(c, hi);
}

}  // namespace

cplx evaluate(const FunctionSpec& f, std::uint64_t n, const SpfTable& table) {
  require(n >= 1, "evaluate: n must be >= 1");
  if (f.kind() == FunctionKind::archimedean_twist && f.overrides().empty()) {
    return std::polar(1.0, f.twist_param() * std::log(static_cast<double>(n)));
  }
  require(n <= table.limit(), "evaluate: n=" + std::to_string(n) + " exceeds sieve limit " +
                                  std::to_string(table.limit()));
  cplx v = 1.0;
  const Factorization fac = factorize(n, table);
  for (const auto& pp : fac.parts()) v *= f.prime_power(pp.prime, pp.exponent);
  return v;
}

int evaluate_int(const FunctionSpec& f, std::uint64_t n, const SpfTable& table) {
  require(f.integer_valued(), "evaluate_int: function is not integer valued");
  require(n >= 1 && n <= table.limit(), "evaluate_int: n out of sieve range");
  int v = 1;
  const Factorization fac = factorize(n, table);
  for (const auto& pp : fac.parts()) v *= f.prime_power_int(pp.prime, pp.exponent);
  return v;
}

ValueBuffer evaluate_range(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                           const SpfTable& table) {
  require(lo >= 1 && lo <= hi, "evaluate_range: need 1 <= lo <= hi");
  require(hi <= table.limit(), "evaluate_range: hi exceeds sieve limit");
  check_domain(f, hi);
  ValueBuffer out;
  out.base = lo;
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  if (f.integer_valued()) {
    std::vector<std::int8_t> v(len);
    kernels::eval_int(f, lo, hi, table, v.data());
    out.values = std::move(v);
  } else {
    std::vector<cplx> v(len);
    kernels::eval_complex(f, lo, hi, table, v.data());
    out.values = std::move(v);
  }
  return out;
}

std::vector<cplx> evaluate_window(const FunctionSpec& f, std::uint64_t lo, std::uint64_t hi,
                                  const SegmentedFactorizer& factorizer) {
  require(lo >= 1 && lo <= hi, "evaluate_window: need 1 <= lo <= hi");
  check_domain(f, hi);
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1), cplx(1.0));
  factorizer.factor_window(lo, hi, [&](std::uint64_t n, std::uint64_t p, std::uint32_t e) {
    out[static_cast<std::size_t>(n - lo)] *= f.prime_power(p, e);
  });
  return out;
}

bool verify_periodic_lift(const FunctionSpec& f, std::uint64_t n, std::uint64_t m, unsigned alpha,
                          std::uint64_t Q, const SpfTable& table) {
  require(n >= 1 && Q >= 1, "verify_periodic_lift: need n >= 1 and Q >= 1");
  std::uint64_t qa = 1;
  for (unsigned i = 0; i < alpha; ++i) {
    require(qa <= std::numeric_limits<std::uint64_t>::max() / Q, "verify_periodic_lift: Q^alpha overflows");
    qa *= Q;
  }
  if (m != 0) {
    require(qa <= (std::numeric_limits<std::uint64_t>::max() - n) / m,
            "verify_periodic_lift: n + m Q^alpha overflows");
  }
  const std::uint64_t shifted = n + m * qa;
  require(shifted <= table.limit(), "verify_periodic_lift: n + m Q^alpha exceeds sieve limit");
  return std::abs(evaluate(f, shifted, table) - evaluate(f, n, table)) == 0.0;
}

namespace {

json prime_set_to_json(const PrimeSet& ps) {
  json j;
  switch (ps.rule()) {
    case PrimeSet::Rule::all:
      j = {{"rule", "all"}, {"max_prime", ps.max_prime()}};
      break;
    case PrimeSet::Rule::explicit_list:
      j = {{"rule", "explicit"}, {"primes", ps.members()}};
      break;
    case PrimeSet::Rule::every_kth:
      j = {{"rule", "every_kth"}, {"k", ps.k()}, {"max_prime", ps.max_prime()}};
      break;
    case PrimeSet::Rule::index_gap:
      j = {{"rule", "index_gap"}, {"depth", ps.depth()}, {"start", ps.start()},
           {"max_prime", ps.max_prime()}};
      break;
  }
  return j;
}

PrimeSet prime_set_from_json(const json& j) {
  const std::string rule = j.at("rule").get<std::string>();
  if (rule == "all") return PrimeSet::all(j.at("max_prime").get<std::uint64_t>());
  if (rule == "explicit") return PrimeSet::explicit_list(j.at("primes").get<std::vector<std::uint64_t>>());
  if (rule == "every_kth") {
    return PrimeSet::every_kth(j.at("k").get<std::uint64_t>(), j.at("max_prime").get<std::uint64_t>());
  }
  if (rule == "index_gap") {
    return PrimeSet::index_gap(j.at("depth").get<unsigned>(), j.value("start", std::uint64_t{1}),
                               j.at("max_prime").get<std::uint64_t>());
  }
  throw InvalidArgument("unknown prime set rule: " + rule);
}

json character_to_json(const RealCharacter& chi) {
  json j = {{"modulus", chi.modulus()}, {"conductor", chi.conductor()}};
  if (chi.mod8_choice()) j["choice"] = *chi.mod8_choice() == Mod8Choice::chi8 ? "chi8" : "psi8";
  return j;
}

RealCharacter character_from_json(const json& j) {
  std::optional<Mod8Choice> choice;
  if (j.contains("choice")) {
    const auto c = j.at("choice").get<std::string>();
    if (c == "chi8") {
      choice = Mod8Choice::chi8;
    } else if (c == "psi8") {
      choice = Mod8Choice::psi8;
    } else {
      throw InvalidArgument("character choice must be chi8 or psi8");
    }
  }
  const auto q = j.at("modulus").get<std::uint64_t>();
  return induced_character(q, j.value("conductor", q), choice);
}

json node_to_json(const FunctionSpec& f) {
  json params = json::object();
  switch (f.kind()) {
    case FunctionKind::liouville_like_big_omega:
    case FunctionKind::liouville_like_small_omega:
      params["prime_set"] = prime_set_to_json(*f.prime_set());
      break;
    case FunctionKind::real_character:
    case FunctionKind::modified_character:
      params["character"] = character_to_json(f.character_param());
      break;
    case FunctionKind::archimedean_twist:
      params["t"] = f.twist_param();
      break;
    case FunctionKind::mrt: {
      const auto& c = f.mrt_param();
      params["M"] = c.params.M;
      params["depth"] = c.params.depth;
      params["growth_exponent"] = c.params.growth_exponent;
      params["grid_step"] = c.params.grid_step;
      params["search_span"] = c.params.search_span;
      json stages = json::array();
      for (const auto& st : c.stages) {
        stages.push_back({{"t_lo", st.t_lo}, {"t_hi", st.t_hi}, {"s", st.s}, {"deviation", st.deviation}});
      }
      params["stages"] = stages;
      break;
    }
    case FunctionKind::pointwise_product: {
      json fs = json::array();
      for (const auto& c : f.children()) fs.push_back(node_to_json(c));
      params["factors"] = fs;
      break;
    }
    case FunctionKind::conjugate:
      params["inner"] = node_to_json(f.children()[0]);
      break;
    case FunctionKind::power:
      params["inner"] = node_to_json(f.children()[0]);
      params["e"] = f.exponent();
      break;
    default:
      break;
  }
  json ov = json::object();
  for (const auto& [p, v] : f.overrides()) {
    if (is_unit_int(v)) {
      ov[std::to_string(p)] = static_cast<int>(v.real());
    } else {
      ov[std::to_string(p)] = json::array({v.real(), v.imag()});
    }
  }
  return {{"kind", kind_name(f.kind())}, {"params", params}, {"overrides", ov}};
}

FunctionSpec node_from_json(const json& j) {
  const FunctionKind kind = kind_from_name(j.at("kind").get<std::string>());
  const json params = j.value("params", json::object());
  FunctionSpec f = FunctionSpec::one();
  switch (kind) {
    case FunctionKind::constant_one:
      break;
    case FunctionKind::liouville:
      f = FunctionSpec::liouville();
      break;
    case FunctionKind::moebius:
      f = FunctionSpec::moebius();
      break;
    case FunctionKind::liouville_like_big_omega:
    case FunctionKind::liouville_like_small_omega:
      f = FunctionSpec::liouville_like(prime_set_from_json(params.at("prime_set")),
                                       kind == FunctionKind::liouville_like_big_omega);
      break;
    case FunctionKind::real_character:
      f = FunctionSpec::character(character_from_json(params.at("character")));
      break;
    case FunctionKind::modified_character:
      f = FunctionSpec::modified_character(character_from_json(params.at("character")), {});
      break;
    case FunctionKind::archimedean_twist:
      f = FunctionSpec::twist(params.at("t").get<double>());
      break;
    case FunctionKind::mrt: {
      MrtParams p;
      p.M = params.value("M", p.M);
      p.depth = params.value("depth", p.depth);
      p.growth_exponent = params.value("growth_exponent", p.growth_exponent);
      p.grid_step = params.value("grid_step", p.grid_step);
      p.search_span = params.value("search_span", p.search_span);
      if (params.contains("stages")) {
        MrtConstruction c;
        c.params = p;
        for (const auto& st : params.at("stages")) {
          c.stages.push_back({st.at("t_lo").get<double>(), st.at("t_hi").get<double>(),
                              st.at("s").get<double>(), st.value("deviation", 0.0)});
        }
        require(c.stages.size() == p.depth, "mrt: stage count must equal depth");
        f = FunctionSpec::mrt(c);
      } else {
        f = FunctionSpec::mrt(build_mrt(p));
      }
      break;
    }
    case FunctionKind::pointwise_product: {
      std::vector<FunctionSpec> fs;
      for (const auto& c : params.at("factors")) fs.push_back(node_from_json(c));
      f = FunctionSpec::product(std::move(fs));
      break;
    }
    case FunctionKind::conjugate:
      f = FunctionSpec::conjugate(node_from_json(params.at("inner")));
      break;
    case FunctionKind::power:
      f = FunctionSpec::power(node_from_json(params.at("inner")), params.at("e").get<unsigned>());
      break;
  }
  if (j.contains("overrides")) {
    for (const auto& [key, val] : j.at("overrides").items()) {
      std::uint64_t p = 0;
      try {
        p = std::stoull(key);
      } catch (const std::exception&) {
        throw InvalidArgument("override key is not an integer: " + key);
      }
      cplx v;
      if (val.is_array()) {
        require(val.size() == 2, "complex override must be [re, im]");
        v = cplx(val[0].get<double>(), val[1].get<double>());
      } else {
        v = val.get<double>();
      }
      f = f.with_override(p, v);
    }
  }
  return f;
}

}  // namespace

std::string to_json(const FunctionSpec& f) { return node_to_json(f).dump(); }

FunctionSpec function_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("function JSON: ") + e.what());
  }
  try {
    return node_from_json(j);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("function JSON: ") + e.what());
  }
}

}  // namespace mflab
