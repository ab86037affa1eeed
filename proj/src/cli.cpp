#include "infaff/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "infaff/dsl.hpp"
#include "infaff/runner.hpp"

namespace infaff::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const CheckReport& r, bool json, std::ostream& out, std::ostream& err) {
  if (json) {
    out << r.to_json() << "\n";
    for (const auto& e : r.entries())
      if (e.status == Status::error) err << e.name << ": " << e.message << "\n";
  } else {
    out << r.to_text();
  }
}

}  // namespace

int exit_code(const CheckReport& r) {
  auto s = r.summary();
  if (s.error) return 2;
  return s.fail ? 1 : 0;
}

int cmd_check(const std::string& file, bool json, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    dsl::Runtime rt(dsl::parse_scenario(read_file(file)));
    CheckReport r = rt.run(seed);
    emit(r, json, out, err);
    return exit_code(r);
  } catch (const dsl::ParseError& e) {
    err << file << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
  } catch (const Error& e) {
    err << file << ": " << e.what() << "\n";
  }
  return 2;
}

int cmd_selftest(Grid grid, bool json, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  CheckReport r = run_selftest({grid, seed});
  emit(r, json, out, err);
  return exit_code(r);
}

int cmd_eval(const std::string& file, const std::string& expr, std::ostream& out, std::ostream& err) {
  try {
    dsl::Scenario s = dsl::parse_scenario(read_file(file));
    dsl::Runtime rt(s);
    out << rt.format(dsl::parse_expression(expr, s)) << "\n";
    return 0;
  } catch (const dsl::ParseError& e) {
    err << e.what() << "\n";
  } catch (const Error& e) {
    err << e.what() << "\n";
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for infinitesimal affine structures", "infaff"};
  app.require_subcommand(1);

  std::string file, expr, grid = "small";
  bool json = false;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Run the checks of a scenario file");
  check->add_option("FILE", file, "scenario file")->required();
  check->add_flag("--json", json, "emit a JSON report");
  check->add_option("--seed", seed, "seed for omitted weights");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in theorem suite");
  selftest->add_option("--grid", grid, "small or full")->check(CLI::IsMember({"small", "full"}));
  selftest->add_flag("--json", json, "emit a JSON report");
  selftest->add_option("--seed", seed, "seed for random maps and weights");

  auto* eval = app.add_subcommand("eval", "Evaluate an expression against a scenario's declarations");
  eval->add_option("FILE", file, "scenario file")->required();
  eval->add_option("--expr", expr, "expression")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 2;
  }
  if (*check) return cmd_check(file, json, seed, out, err);
  if (*selftest) return cmd_selftest(grid == "full" ? Grid::full : Grid::small, json, seed, out, err);
  return cmd_eval(file, expr, out, err);
}

}  // namespace infaff::cli
