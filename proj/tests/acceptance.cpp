// One line per acceptance criterion. Exit status is nonzero if any fails.
//   acceptance [name ...]

#include <iostream>
#include <string>
#include <vector>

#include "mflab/checks.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> names;
  for (int i = 1; i < argc; ++i) names.emplace_back(argv[i]);
  if (names.empty()) {
    for (const auto& c : mflab::check_registry()) names.push_back(c.name);
  }
  mflab::CheckContext ctx;
  int failed = 0;
  for (const auto& name : names) {
    mflab::CheckResult r;
    try {
      r = mflab::run_check(name, ctx);
    } catch (const std::exception& e) {
      r.name = name;
      r.measured = std::string("error: ") + e.what();
    }
    failed += !r.pass;
    std::cout << mflab::format_result_line(r) << std::endl;
  }
  std::cout << (names.size() - static_cast<std::size_t>(failed)) << "/" << names.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
