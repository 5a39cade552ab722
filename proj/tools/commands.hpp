#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "checks.hpp"
#include "config.hpp"

namespace rank1sft::cli {

// A command's output in both serializations.
struct Report {
  json body;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  int exit_code = 0;
};

Report cmd_describe(const RunConfig& c);
Report cmd_eval(const RunConfig& c);
Report cmd_transform(const RunConfig& c);
Report cmd_invert(const RunConfig& c);
Report cmd_check(const RunConfig& c);
Report cmd_calibrate(const RunConfig& c);

// Shortest round-trip representation with a '.' decimal point, independent of the locale.
std::string format_number(double v);
std::string render(const Report& r, const std::string& format);

// Full command line: exit 0 when everything passed, 1 when a check failed
// or a command could not complete, 2 for an invalid config or command line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rank1sft::cli
