#pragma once

// The primary acceptance matrix: thirteen pass/fail checks.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace hw::cmd {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::set<int> only;  // empty runs everything
  std::uint64_t seed = 20240611;
  int workers = 1;
};

std::vector<CriterionResult> run_primary_suite(const SuiteOptions& opt,
                                               const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace hw::cmd
