#include "cli.hpp"

#include <omp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mflab/checks.hpp"
#include "mflab/correl.hpp"
#include "mflab/furst.hpp"
#include "mflab/hudson.hpp"
#include "mflab/patterns.hpp"
#include "mflab/pretdist.hpp"

#ifndef MFLAB_VERSION
#define MFLAB_VERSION "0.0.0"
#endif

namespace mflab::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos == s.size() && s.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument(what + ": expected a nonnegative integer, got '" + s + "'");
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument(what + ": expected a number, got '" + s + "'");
}

std::string cylinder_str(const Cylinder& c) {
  std::string s;
  for (const auto& [k, v] : c.assignment) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k) + ":" + (v > 0 ? "+1" : v < 0 ? "-1" : "0");
  }
  return s;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---- output -----------------------------------------------------------

enum class Format { csv, jsonl };

class Emitter {
 public:
  Emitter(std::ostream& out, Format fmt) : out_(out), fmt_(fmt) {}

  /// Written before the first header or row, so argument errors found in
  /// the action leave stdout empty.
  void set_preamble(const std::string& command, const std::string& canonical_config) {
    command_ = command;
    config_ = canonical_config;
  }

  void header(std::vector<std::string> cols) {
    flush_preamble();
    cols_ = std::move(cols);
    if (fmt_ == Format::csv) row_csv(std::vector<json>(cols_.begin(), cols_.end()));
  }

  void row(const std::vector<json>& fields) {
    flush_preamble();
    if (fmt_ == Format::csv) {
      row_csv(fields);
      return;
    }
    json j;
    for (std::size_t i = 0; i < fields.size() && i < cols_.size(); ++i) j[cols_[i]] = fields[i];
    out_ << j.dump() << '\n';
  }

  void flush_preamble() {
    if (written_) return;
    written_ = true;
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_);
    if (fmt_ == Format::csv) {
      out_ << "# mflab " << MFLAB_VERSION << " " << command_ << " config " << hash.str() << '\n';
    } else {
      json j;
      j["tool"] = "mflab";
      j["version"] = MFLAB_VERSION;
      j["command"] = command_;
      j["config_hash"] = hash.str();
      out_ << j.dump() << '\n';
    }
  }

 private:
  void row_csv(const std::vector<json>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      const auto& f = fields[i];
      if (f.is_null()) continue;
      if (f.is_string()) {
        const auto s = f.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) {
          out_ << s;
        } else {
          out_ << '"';
          for (char c : s) out_ << (c == '"' ? "\"\"" : std::string(1, c));
          out_ << '"';
        }
      } else if (f.is_boolean()) {
        out_ << (f.get<bool>() ? "true" : "false");
      } else {
        out_ << f.dump();
      }
    }
    out_ << '\n';
  }

  std::ostream& out_;
  Format fmt_;
  std::vector<std::string> cols_;
  std::string command_, config_;
  bool written_ = false;
};

json value_json(const cplx& v, bool integer) {
  if (integer) return static_cast<int>(v.real());
  return json::array({v.real(), v.imag()});
}

// ---- configuration ----------------------------------------------------

struct Global {
  std::uint64_t limit = 0;  // 0: just large enough for the command
  std::string cache;
  bool auto_build = true;
  int threads = 0;
  std::string format = "csv";
};

class TableSource {
 public:
  explicit TableSource(const Global& g) : g_(g) {}

  const SpfTable& get(std::uint64_t needed) {
    const std::uint64_t want = std::max<std::uint64_t>({needed, g_.limit, 2});
    if (table_ && table_->limit() >= want) return *table_;
    if (!g_.cache.empty()) {
      if (std::filesystem::exists(g_.cache)) {
        auto t = load_spf_cache(g_.cache);
        if (t.limit() < want) {
          throw FormatError("sieve cache " + g_.cache + " covers " + std::to_string(t.limit()) + " < " +
                            std::to_string(want));
        }
        table_ = std::move(t);
        return *table_;
      }
      if (!g_.auto_build) throw FormatError("sieve cache " + g_.cache + " is missing (auto-build disabled)");
      table_ = build_spf_sieve(want);
      save_spf_cache(g_.cache, *table_);
      return *table_;
    }
    table_ = build_spf_sieve(want);
    return *table_;
  }

 private:
  const Global& g_;
  std::optional<SpfTable> table_;
};

/// Deterministic key=value dump of every option that can change output.
std::string canonical_config(const CLI::App* app) {
  std::string s;
  for (const CLI::App* a = app; a; a = a->get_parent()) {
    std::string part = a->get_name() + ";";
    for (const auto* opt : a->get_options()) {
      const auto name = opt->get_name(false, true);
      if (name == "--help" || name == "--threads" || name == "--config" || name == "--help-all") continue;
      part += name + "=";
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) part += r + ",";
      } else {
        part += opt->get_default_str();
      }
      part += ";";
    }
    s = part + "|" + s;
  }
  return s;
}

// ---- manifest ---------------------------------------------------------

struct ManifestEntry {
  std::string check;
  CheckParams params;
  std::optional<double> tolerance;
};

struct Manifest {
  std::optional<std::uint64_t> sieve_limit;
  std::optional<std::string> cache;
  std::optional<bool> auto_build;
  std::vector<ManifestEntry> checks;
};

Manifest load_manifest(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw InvalidArgument("cannot read manifest " + path);
  } catch (const YAML::Exception& e) {
    throw InvalidArgument("manifest " + path + ": " + e.what());
  }
  Manifest m;
  try {
    YAML::Node list;
    if (root.IsNull()) return m;
    if (root.IsSequence()) {
      list = root;
    } else if (root.IsMap()) {
      if (root["sieve_limit"]) m.sieve_limit = root["sieve_limit"].as<std::uint64_t>();
      if (root["cache"]) m.cache = root["cache"].as<std::string>();
      if (root["auto_build"]) m.auto_build = root["auto_build"].as<bool>();
      list = root["checks"];
    } else {
      throw InvalidArgument("manifest " + path + ": expected a list or a map with 'checks'");
    }
    if (!list || list.IsNull()) return m;
    require(list.IsSequence(), "manifest " + path + ": 'checks' must be a list");
    for (const auto& item : list) {
      ManifestEntry e;
      if (item.IsScalar()) {
        e.check = item.as<std::string>();
      } else {
        require(item.IsMap() && item["check"], "manifest " + path + ": each entry needs 'check'");
        e.check = item["check"].as<std::string>();
        if (item["tolerance"]) e.tolerance = item["tolerance"].as<double>();
        if (item["params"]) {
          for (const auto& kv : item["params"]) e.params[kv.first.as<std::string>()] = kv.second.as<double>();
        }
      }
      find_check(e.check);  // validates the name
      m.checks.push_back(std::move(e));
    }
  } catch (const YAML::Exception& e) {
    throw InvalidArgument("manifest " + path + ": " + e.what());
  }
  return m;
}

}  // namespace

FunctionSpec parse_function(const std::string& text, std::uint64_t max_prime) {
  require(!text.empty(), "empty function name");
  if (text[0] == '{') return function_from_json(text);
  if (text[0] == '@') {
    std::ifstream in(text.substr(1));
    require(in.good(), "cannot read function file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return function_from_json(ss.str());
  }
  const auto parts = split(text, ':');
  const auto& k = parts[0];
  auto arg = [&](std::size_t i) -> const std::string& {
    require(parts.size() > i, "function '" + text + "' is missing a parameter");
    return parts[i];
  };
  if (parts.size() == 1) {
    if (k == "one") return FunctionSpec::one();
    if (k == "liouville" || k == "lambda") return FunctionSpec::liouville();
    if (k == "moebius" || k == "mu") return FunctionSpec::moebius();
    if (k == "mu2") return FunctionSpec::power(FunctionSpec::moebius(), 2);
    if (k == "g1") return FunctionSpec::hudson_g(1);
    if (k == "g2") return FunctionSpec::hudson_g(2);
    if (k == "g3") return FunctionSpec::hudson_g(3);
  }
  if (k == "chi") {
    std::optional<Mod8Choice> choice;
    if (parts.size() > 2) {
      require(arg(2) == "chi8" || arg(2) == "psi8", "chi: choice must be chi8 or psi8");
      choice = arg(2) == "chi8" ? Mod8Choice::chi8 : Mod8Choice::psi8;
    }
    return FunctionSpec::character(real_primitive_character(to_u64(arg(1), "chi modulus"), choice));
  }
  if (k == "legendre") {
    require(arg(2) == "+" || arg(2) == "-", "legendre: sign must be + or -");
    return FunctionSpec::modified_legendre(to_u64(arg(1), "legendre prime"), arg(2) == "+" ? 1 : -1);
  }
  if (k == "twist") return FunctionSpec::twist(to_double(arg(1), "twist t"));
  if (k == "lambda-every" || k == "omega-every") {
    return FunctionSpec::liouville_like(PrimeSet::every_kth(to_u64(arg(1), "k"), max_prime), k == "lambda-every");
  }
  if (k == "lambda-gap") {
    return FunctionSpec::liouville_like(
        PrimeSet::index_gap(static_cast<unsigned>(to_u64(arg(1), "depth")), to_u64(arg(2), "start"), max_prime), true);
  }
  if (k == "mrt") {
    MrtParams p;
    if (parts.size() > 1) p.M = to_u64(arg(1), "M");
    if (parts.size() > 2) p.depth = static_cast<unsigned>(to_u64(arg(2), "depth"));
    return FunctionSpec::mrt(build_mrt(p));
  }
  throw InvalidArgument("unknown function '" + text + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mflab: experiments with bounded multiplicative functions", "mflab"};
  app.set_version_flag("--version", std::string(MFLAB_VERSION));
  app.set_config("--config", "", "key=value configuration file; flags win");
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--limit", g.limit, "sieve limit (default: what the command needs)");
  app.add_option("--cache", g.cache, "sieve cache file, loaded if present");
  app.add_flag("!--no-auto-build", g.auto_build, "fail instead of building a missing cache");
  app.add_option("--threads", g.threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));

  std::function<void(Emitter&, TableSource&)> action;
  const CLI::App* chosen = nullptr;
  auto bind = [&](CLI::App* sub, std::function<void(Emitter&, TableSource&)> fn) {
    sub->callback([&, sub, fn] {
      chosen = sub;
      action = fn;
    });
  };

  // sieve
  auto* sieve = app.add_subcommand("sieve", "build the smallest-prime-factor table (and cache)");
  std::uint64_t sieve_limit = 2'100'000;
  sieve->add_option("--to", sieve_limit, "sieve limit")->capture_default_str();
  bind(sieve, [&](Emitter& em, TableSource&) {
    require(sieve_limit >= 2, "sieve: limit must be >= 2");
    const auto t = build_spf_sieve(sieve_limit);
    if (!g.cache.empty()) save_spf_cache(g.cache, t);
    em.header({"limit", "primes", "cache"});
    em.row({t.limit(), primes_up_to(t.limit()).size(), g.cache});
  });

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a function at n or on a range");
  std::string eval_fn = "liouville";
  std::optional<std::uint64_t> eval_n, eval_from, eval_to;
  eval->add_option("--fn", eval_fn, "function")->capture_default_str();
  eval->add_option("--n", eval_n, "single point");
  eval->add_option("--from", eval_from, "range start");
  eval->add_option("--to", eval_to, "range end");
  bind(eval, [&](Emitter& em, TableSource& ts) {
    std::uint64_t lo = 0, hi = 0;
    if (eval_n) {
      require(!eval_from && !eval_to, "eval: use either --n or --from/--to");
      lo = hi = *eval_n;
    } else {
      require(eval_from && eval_to, "eval: need --n or both --from and --to");
      lo = *eval_from;
      hi = *eval_to;
    }
    require(lo >= 1 && lo <= hi, "eval: need 1 <= n");
    const auto& t = ts.get(hi);
    const auto f = parse_function(eval_fn, t.limit());
    const auto buf = evaluate_range(f, lo, hi, t);
    em.header({"n", "value"});
    for (std::uint64_t n = lo; n <= hi; ++n) em.row({n, value_json(buf.at(n), buf.is_integer())});
  });

  // dist
  auto* dist = app.add_subcommand("dist", "pretentious distance D(f, g; y, x)");
  std::string dist_f = "liouville", dist_g = "one";
  std::uint64_t dist_x = 1'000'000, dist_y = 2;
  std::vector<double> dist_u;
  dist->add_option("--f", dist_f)->capture_default_str();
  dist->add_option("--g", dist_g)->capture_default_str();
  dist->add_option("--x", dist_x)->capture_default_str();
  dist->add_option("--y", dist_y)->capture_default_str();
  dist->add_option("--twist-profile", dist_u, "u values: D(n^{iu},1;x)^2 against log(1+|u| log x)")->delimiter(',');
  bind(dist, [&](Emitter& em, TableSource& ts) {
    const auto& t = ts.get(dist_x);
    if (!dist_u.empty()) {
      em.header({"u", "x", "distance_squared", "log_1_plus_u_log_x"});
      for (double u : dist_u) {
        const auto p = twist_distance_profile(u, dist_x, t);
        em.row({u, dist_x, p.measured, p.predicted});
      }
      return;
    }
    const DistanceQuery q{parse_function(dist_f, t.limit()), parse_function(dist_g, t.limit()), dist_y, dist_x};
    const double d2 = distance_squared(q, t);
    em.header({"f", "g", "y", "x", "distance", "distance_squared"});
    em.row({dist_f, dist_g, dist_y, dist_x, std::sqrt(d2), d2});
  });

  // correlate
  auto* corr = app.add_subcommand("correlate", "weighted average of prod f_j(a_j n + h_j)");
  std::vector<std::string> corr_fns{"liouville"};
  std::vector<std::uint64_t> corr_h{0, 1}, corr_a;
  std::string corr_mode = "cesaro";
  std::uint64_t corr_x = 1'000'000;
  std::optional<std::uint64_t> corr_start;
  std::optional<double> corr_scan;
  corr->add_option("--fn", corr_fns, "one function for all factors, or one per factor")->delimiter(',');
  corr->add_option("--shifts", corr_h, "h_j")->delimiter(',')->capture_default_str();
  corr->add_option("--dilations", corr_a, "a_j (default all 1)")->delimiter(',');
  corr->add_option("--mode", corr_mode)->check(CLI::IsMember({"cesaro", "log", "loglog"}))->capture_default_str();
  corr->add_option("--x", corr_x)->capture_default_str();
  corr->add_option("--start", corr_start, "window start (default depends on mode)");
  corr->add_option("--scan", corr_scan, "also report every scale on a geometric grid with this ratio");
  bind(corr, [&](Emitter& em, TableSource& ts) {
    const std::size_t k = corr_h.size();
    require(k >= 1, "correlate: need at least one shift");
    require(corr_fns.size() == 1 || corr_fns.size() == k, "correlate: --fn count must be 1 or match --shifts");
    require(corr_a.empty() || corr_a.size() == k, "correlate: --dilations count must match --shifts");
    std::uint64_t need = 2;
    for (std::size_t j = 0; j < k; ++j) need = std::max(need, (corr_a.empty() ? 1 : corr_a[j]) * corr_x + corr_h[j]);
    const auto& t = ts.get(need);
    CorrelationSpec spec;
    for (std::size_t j = 0; j < k; ++j) {
      spec.factors.push_back({parse_function(corr_fns.size() == 1 ? corr_fns[0] : corr_fns[j], t.limit()),
                              corr_a.empty() ? 1 : corr_a[j], corr_h[j], 1});
    }
    spec.mode = mode_from_name(corr_mode);
    spec.x = corr_x;
    spec.start = corr_start;
    spec.nondegenerate = !is_degenerate(spec.factors);
    std::vector<CorrelationResult> res;
    if (corr_scan) {
      require(*corr_scan > 1.0, "correlate: --scan ratio must exceed 1");
      res = correlation_scan(spec, geometric_grid(std::max<std::uint64_t>(corr_start.value_or(1), 10), corr_x, *corr_scan), t);
    } else {
      res.push_back(correlation(spec, t));
    }
    em.header({"mode", "lo", "x", "re", "im", "total_weight", "degenerate", "annotation"});
    for (const auto& r : res) {
      em.row({corr_mode, r.lo, r.x, r.value.real(), r.value.imag(), r.total_weight, r.degenerate, r.annotation});
    }
  });

  // furstenberg
  auto* furst = app.add_subcommand("furstenberg", "cylinder frequencies and the product relation");
  std::string fu_f = "lambda-gap:2:1";
  std::optional<std::string> fu_g;
  std::vector<std::int64_t> fu_support{0, 1, 2};
  std::vector<int> fu_alphabet{-1, 0, 1};
  std::uint64_t fu_x = 1'000'000;
  bool fu_all_sub = false;
  furst->add_option("--f", fu_f)->capture_default_str();
  furst->add_option("--g", fu_g, "{0,1}-valued g: check nu_fg(C) = 2^-r nu_g(C^2)");
  furst->add_option("--support", fu_support)->delimiter(',')->capture_default_str();
  furst->add_option("--alphabet", fu_alphabet)->delimiter(',')->capture_default_str();
  furst->add_option("--x", fu_x)->capture_default_str();
  furst->add_flag("--all-subsupports", fu_all_sub, "use every nonempty subset of the support");
  bind(furst, [&](Emitter& em, TableSource& ts) {
    require(!fu_support.empty(), "furstenberg: empty support");
    std::int64_t maxc = 0;
    for (auto c : fu_support) maxc = std::max(maxc, c);
    const auto& t = ts.get(fu_x + static_cast<std::uint64_t>(std::max<std::int64_t>(maxc, 0)));
    std::vector<std::vector<std::int64_t>> supports;
    if (fu_all_sub) {
      require(fu_support.size() <= 16, "furstenberg: support too large for --all-subsupports");
      for (unsigned mask = 1; mask < (1u << fu_support.size()); ++mask) {
        std::vector<std::int64_t> s;
        for (std::size_t i = 0; i < fu_support.size(); ++i) {
          if (mask & (1u << i)) s.push_back(fu_support[i]);
        }
        supports.push_back(s);
      }
    } else {
      supports.push_back(fu_support);
    }
    std::vector<Cylinder> cyls;
    for (const auto& s : supports) {
      for (auto& c : all_cylinders(s, fu_alphabet)) cyls.push_back(std::move(c));
    }
    const auto f = parse_function(fu_f, t.limit());
    if (fu_g) {
      const auto g = parse_function(*fu_g, t.limit());
      const auto res = check_product_relation(f, g, cyls, fu_x, t);
      em.header({"cylinder", "r", "nu_fg", "nu_g_squared_scaled", "deviation"});
      for (std::size_t i = 0; i < cyls.size(); ++i) {
        em.row({cylinder_str(cyls[i]), cyls[i].nonzero(), res.lhs[i], res.rhs[i], std::abs(res.lhs[i] - res.rhs[i])});
      }
      return;
    }
    em.header({"cylinder", "hits", "window", "frequency"});
    for (const auto& c : cyls) {
      const auto cnt = cylinder_count(f, c, fu_x, t);
      em.row({cylinder_str(c), cnt.hits, cnt.window, cnt.frequency()});
    }
  });

  // patterns
  auto* pat = app.add_subcommand("patterns", "sign-pattern census, search and longest runs");
  std::string pa_fn = "liouville", pa_mode = "cesaro";
  std::size_t pa_len = 3;
  std::uint64_t pa_x = 1'000'000;
  std::optional<std::string> pa_find;
  std::optional<int> pa_run;
  std::size_t pa_limit = 10;
  pat->add_option("--fn", pa_fn)->capture_default_str();
  pat->add_option("--length", pa_len, "census pattern length")->capture_default_str();
  pat->add_option("--x", pa_x)->capture_default_str();
  pat->add_option("--mode", pa_mode)->check(CLI::IsMember({"cesaro", "log", "loglog"}))->capture_default_str();
  pat->add_option("--find", pa_find, "pattern such as ++-+: list n with f(n+1..n+l) equal to it");
  pat->add_option("--max-matches", pa_limit, "matches listed by --find")->capture_default_str();
  pat->add_option("--max-run", pa_run, "longest run of this value (+1 or -1)");
  bind(pat, [&](Emitter& em, TableSource& ts) {
    const auto& t = ts.get(pa_x + 64);
    const auto f = parse_function(pa_fn, t.limit());
    if (pa_find) {
      const auto p = SignPattern::from_string(*pa_find);
      const auto hits = find_pattern(f, p, 1, pa_x, t);
      em.header({"pattern", "n"});
      for (std::size_t i = 0; i < hits.size() && i < pa_limit; ++i) em.row({p.str(), hits[i]});
      return;
    }
    if (pa_run) {
      require(*pa_run == 1 || *pa_run == -1, "patterns: --max-run must be 1 or -1");
      const auto r = max_run_length(f, *pa_run, pa_x, t);
      em.header({"value", "x", "length", "witness"});
      em.row({*pa_run, pa_x, r.length, r.witness});
      return;
    }
    const auto census = pattern_census(f, pa_len, pa_x, mode_from_name(pa_mode), t);
    em.header({"pattern", "mode", "lo", "x", "density"});
    for (std::size_t i = 0; i < census.size(); ++i) {
      std::string s;
      for (std::size_t b = 0; b < pa_len; ++b) s += (i >> (pa_len - 1 - b)) & 1 ? '-' : '+';
      em.row({s, pa_mode, census[i].lo, census[i].x, census[i].value});
    }
  });

  // discrepancy
  auto* disc = app.add_subcommand("discrepancy", "partial sums S(n) and the level sets |S| >= M");
  std::string di_fn = "liouville";
  std::uint64_t di_x = 1'000'000;
  std::vector<std::int64_t> di_levels{1, 2, 5, 10};
  bool di_series = false;
  disc->add_option("--fn", di_fn)->capture_default_str();
  disc->add_option("--x", di_x)->capture_default_str();
  disc->add_option("--levels", di_levels)->delimiter(',')->capture_default_str();
  disc->add_flag("--series", di_series, "emit S(n) for every n instead of the level summary");
  bind(disc, [&](Emitter& em, TableSource& ts) {
    const auto& t = ts.get(di_x);
    const auto prof = discrepancy_profile(parse_function(di_fn, t.limit()), di_levels, di_x, t);
    if (di_series) {
      em.header({"n", "S"});
      for (std::uint64_t n = 1; n <= di_x; ++n) em.row({n, prof.partial_sums[n - 1]});
      return;
    }
    em.header({"M", "x", "count", "cesaro", "log", "max_abs", "argmax"});
    for (const auto& l : prof.levels) em.row({l.M, di_x, l.count, l.cesaro.value, l.log.value, prof.max_abs, prof.argmax});
  });

  // hudson verify
  auto* hud = app.add_subcommand("hudson", "classification of length-3 functions");
  hud->require_subcommand(1);
  auto* verify = hud->add_subcommand("verify", "classify every candidate; CSV rows then summary JSON");
  bool hu_deep = false, hu_summary_only = false;
  std::uint64_t hu_cap = 100'000;
  verify->add_flag("--deep", hu_deep, "confirm criterion exclusions by direct witnesses");
  verify->add_option("--witness-cap", hu_cap)->capture_default_str();
  verify->add_flag("--summary-only", hu_summary_only, "print only the summary JSON");
  bind(verify, [&](Emitter& em, TableSource&) {
    ClassificationOptions opt;
    opt.deep_verify = hu_deep;
    opt.witness_cap = hu_cap;
    const auto rows = enumerate_all_candidates(opt);
    if (!hu_summary_only) {
      em.header({"modulus", "character", "f2", "f3", "fp0", "status", "witness_n", "bound_used"});
      for (const auto& r : rows) {
        const auto& c = r.candidate;
        em.row({c.m, c.chi.id(), c.f2, c.f3, c.prime_modulus() ? json(c.fp0) : json(),
                status_name(r.status), r.witness ? json(*r.witness) : json(), r.bound});
      }
    }
    em.flush_preamble();
    out << classification_summary_json(rows) << '\n';
  });

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run the checks named in a manifest");
  std::string manifest_path;
  bool rep_timing = false;
  rep->add_option("--manifest", manifest_path, "YAML manifest")->required();
  rep->add_flag("--timing", rep_timing, "include wall-clock times (output no longer byte-stable)");
  bool rep_failed = false;
  bind(rep, [&](Emitter& em, TableSource&) {
    const auto m = load_manifest(manifest_path);
    Global mg = g;
    if (m.sieve_limit && g.limit == 0) mg.limit = *m.sieve_limit;
    if (m.cache && g.cache.empty()) mg.cache = *m.cache;
    if (m.auto_build) mg.auto_build = mg.auto_build && *m.auto_build;
    TableSource mts(mg);
    std::optional<CheckContext> ctx;
    std::vector<std::string> cols{"criterion", "check", "pass", "measured", "tolerance", "note"};
    if (rep_timing) cols.insert(cols.end(), {"timing", "seconds"});
    std::size_t passed = 0;
    if (m.checks.empty()) {
      em.flush_preamble();
      err << "0/0 checks pass\n";
      return;
    }
    em.header(cols);
    for (const auto& e : m.checks) {
      if (!ctx) ctx.emplace(mts.get(std::max<std::uint64_t>(mg.limit, 2'100'000)));
      CheckResult r;
      try {
        r = run_check(e.check, *ctx, e.params, e.tolerance);
      } catch (const InvalidArgument&) {
        throw;
      } catch (const std::exception& ex) {
        r.name = e.check;
        r.criterion = find_check(e.check).criterion;
        r.measured = std::string("error: ") + ex.what();
      }
      passed += r.pass;
      std::vector<json> row{r.criterion, r.name, r.pass, r.measured, r.tolerance, r.note};
      if (rep_timing) {
        row.push_back(r.timing);
        row.push_back(r.seconds);
      }
      em.row(row);
      err << format_result_line(r, rep_timing) << '\n';
    }
    err << passed << "/" << m.checks.size() << " checks pass\n";
    rep_failed = passed != m.checks.size();
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << MFLAB_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (!action) {
    err << app.help();
    return 2;
  }
  const int saved_threads = omp_get_max_threads();
  if (g.threads > 0) omp_set_num_threads(g.threads);
  int code = 0;
  try {
    Emitter em(out, g.format == "jsonl" ? Format::jsonl : Format::csv);
    TableSource ts(g);
    std::string path;
    for (const CLI::App* a = chosen; a && a->get_parent(); a = a->get_parent()) {
      path = a->get_name() + (path.empty() ? "" : " ") + path;
    }
    em.set_preamble(path, canonical_config(chosen));
    action(em, ts);
    code = rep_failed ? 1 : 0;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    code = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = 1;
  }
  omp_set_num_threads(saved_threads);
  return code;
}

}  // namespace mflab::cli
