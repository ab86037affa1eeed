#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "infaff/report.hpp"
#include "infaff/selftest.hpp"

namespace infaff::cli {

/// 0 if every entry passed, 2 if any errored, 1 otherwise.
int exit_code(const CheckReport& r);

int cmd_check(const std::string& file, bool json, std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_selftest(Grid grid, bool json, std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_eval(const std::string& file, const std::string& expr, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infaff::cli
