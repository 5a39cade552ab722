#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace rank1sft::cli {

struct CheckResult {
  std::string name;
  std::string target;  // what is measured
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// measured <= tolerance, with NaN failing.
CheckResult make_check(std::string name, std::string target, double measured, double tolerance,
                       std::string detail = {});

// Runs one suite. Numerical failures become failed checks.
std::vector<CheckResult> run_suite(const RunConfig& c, const std::string& suite);

json to_json(const CheckResult& r);

}  // namespace rank1sft::cli
