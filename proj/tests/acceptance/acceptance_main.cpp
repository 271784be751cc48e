// Runs the thirteen primary checks; one line each, nonzero exit if any fails.
// Optional arguments are criterion ids to restrict the run.

#include <cstdlib>
#include <iostream>

#include "suite.hpp"

int main(int argc, char** argv) {
  hw::cmd::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.insert(std::atoi(argv[i]));
  const auto results = hw::cmd::run_primary_suite(opt, [](const hw::cmd::CriterionResult& r) {
    std::cout << hw::cmd::format_result(r) << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
