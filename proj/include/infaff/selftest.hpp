#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infaff/report.hpp"

namespace infaff {

enum class Grid { small, full };

struct SelftestOptions {
  Grid grid = Grid::small;
  std::uint64_t seed = 0;
};

struct Criterion {
  int number;
  std::string anchor;  // prefix of every entry name, e.g. "c1:thm-i-morph"
  std::string title;
};

const std::vector<Criterion>& criteria();

/// Entries of one criterion (1-based), named "<anchor>/<cell>".
CheckReport run_criterion(int number, const SelftestOptions& opts);
CheckReport run_selftest(const SelftestOptions& opts);

}  // namespace infaff
