#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mflab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mflab_cli_" + name)).string();
}

}  // namespace

TEST_CASE("eval") {
  const auto r = run({"eval", "--fn", "liouville", "--n", "8"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0].rfind("# mflab ", 0) == 0);
  CHECK(l[0].find(" config ") != std::string::npos);
  CHECK(l[1] == "n,value");
  CHECK(l[2] == "8,-1");

  const auto mu = run({"eval", "--fn", "moebius", "--from", "1", "--to", "6"});
  CHECK(lines(mu.out).back() == "6,1");

  const auto j = run({"eval", "--fn", "chi:4", "--from", "1", "--to", "3", "--format", "jsonl"});
  REQUIRE(j.code == 0);
  const auto jl = lines(j.out);
  REQUIRE(jl.size() == 4);
  CHECK(nlohmann::json::parse(jl[0])["tool"] == "mflab");
  CHECK(nlohmann::json::parse(jl[3])["value"] == -1);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"eval", "--n", "x"}).code == 2);
  CHECK(run({"eval", "--fn", "nope", "--n", "3"}).code == 2);
  const auto bad = run({"eval", "--fn", "liouville", "--n", "0"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK(run({"correlate", "--shifts", "0,1", "--fn", "liouville,moebius,one"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  const auto missing = temp_path("missing.bin");
  std::filesystem::remove(missing);
  CHECK(run({"--cache", missing, "--no-auto-build", "eval", "--n", "3"}).code == 1);
}

TEST_CASE("sieve cache round trip") {
  const auto path = temp_path("cache.bin");
  std::filesystem::remove(path);
  const auto s = run({"--cache", path, "sieve", "--to", "1000"});
  REQUIRE(s.code == 0);
  CHECK(lines(s.out).back().rfind("1000,168,", 0) == 0);
  CHECK(run({"--cache", path, "--no-auto-build", "eval", "--n", "997"}).code == 0);
  // the cache is too small for this request
  CHECK(run({"--cache", path, "eval", "--n", "5000"}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("hudson verify") {
  const auto r = run({"hudson", "verify"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 1 + 1 + 356 + 1);
  CHECK(l[1] == "modulus,character,f2,f3,fp0,status,witness_n,bound_used");
  const auto summary = nlohmann::json::parse(l.back());
  CHECK(summary["members"] == 13);
  CHECK(summary["mismatches"] == 0);
  CHECK(summary["length_two"] == 2);
}

TEST_CASE("deterministic output") {
  const std::vector<std::string> corr{"correlate", "--fn", "liouville", "--shifts", "0,1,2", "--mode", "log",
                                      "--x", "200000", "--scan", "2"};
  std::vector<std::string> one{"--threads", "1"}, four{"--threads", "4"};
  one.insert(one.end(), corr.begin(), corr.end());
  four.insert(four.end(), corr.begin(), corr.end());
  const auto a = run(one), b = run(four), c = run(four);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
  // the config hash reflects parameters that change output
  auto other = corr;
  other[8] = "100000";
  CHECK(lines(run(other).out)[0] != lines(a.out)[0]);

  const auto d1 = run({"--threads", "1", "discrepancy", "--x", "100000"});
  const auto d4 = run({"--threads", "4", "discrepancy", "--x", "100000"});
  CHECK(d1.out == d4.out);
}

TEST_CASE("other subcommands") {
  const auto d = run({"dist", "--f", "liouville", "--g", "one", "--x", "1000"});
  REQUIRE(d.code == 0);
  CHECK(lines(d.out)[1] == "f,g,y,x,distance,distance_squared");
  const auto p = run({"patterns", "--fn", "legendre:3:-", "--max-run", "1", "--x", "10000"});
  REQUIRE(p.code == 0);
  CHECK(lines(p.out).back() == "1,10000,2,6");
  const auto f = run({"patterns", "--fn", "liouville", "--find", "++++", "--x", "1000", "--max-matches", "1"});
  REQUIRE(f.code == 0);
  CHECK(lines(f.out).size() == 3);
  const auto fu = run({"furstenberg", "--f", "liouville", "--support", "0,1", "--alphabet", "-1,1", "--x", "10000"});
  REQUIRE(fu.code == 0);
  CHECK(lines(fu.out).size() == 2 + 4);
}

TEST_CASE("reproduce") {
  const auto empty = temp_path("empty.yaml");
  { std::ofstream(empty) << ""; }
  const auto e = run({"reproduce", "--manifest", empty});
  CHECK(e.code == 0);
  CHECK(lines(e.out).size() == 1);

  const auto forced = temp_path("forced.yaml");
  { std::ofstream(forced) << "checks:\n  - check: twist-distance\n    params: {x: 100000}\n    tolerance: 0\n"; }
  const auto f = run({"reproduce", "--manifest", forced});
  CHECK(f.code == 1);
  CHECK(lines(f.out).back().find(",false,") != std::string::npos);

  const auto ok = temp_path("ok.yaml");
  { std::ofstream(ok) << "- hudson-witness-table\n- check: discrepancy\n  params: {x: 100000}\n"; }
  const auto o = run({"reproduce", "--manifest", ok});
  CHECK(o.code == 0);
  CHECK(lines(o.out).size() == 4);

  const auto unknown = temp_path("unknown.yaml");
  { std::ofstream(unknown) << "- no-such-check\n"; }
  CHECK(run({"reproduce", "--manifest", unknown}).code == 2);
  CHECK(run({"reproduce", "--manifest", temp_path("absent.yaml")}).code == 2);
  for (const auto& p : {empty, forced, ok, unknown}) std::filesystem::remove(p);
}
