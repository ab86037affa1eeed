// One line per acceptance criterion: full grid, exact results, wall-clock budget.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "infaff/selftest.hpp"

int main(int argc, char** argv) {
  static const double budget_seconds[] = {60, 60, 10, 30, 30, 30, 10, 120, 10, 10, 10, 10};
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& c : infaff::criteria()) {
    if (only && c.number != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    infaff::CheckReport r = infaff::run_criterion(c.number, {infaff::Grid::full, 0});
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double budget = budget_seconds[c.number - 1];
    auto s = r.summary();
    bool ok = r.all_pass() && secs < budget;
    std::string detail = std::to_string(s.pass) + "/" + std::to_string(r.entries().size()) + " entries pass";
    if (const auto* p = r.first_problem()) {
      detail += "; first problem " + p->name + " (" + std::string(infaff::status_name(p->status)) + ")";
      if (p->witness) detail += ": " + p->witness->location;
      if (!p->message.empty()) detail += ": " + p->message;
    }
    if (secs >= budget) detail += "; over budget";
    std::printf("criterion %2d %s  %6.2fs / %3.0fs  %s  %s\n", c.number, ok ? "PASS" : "FAIL", secs, budget,
                c.anchor.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures ? 1 : 0;
}
