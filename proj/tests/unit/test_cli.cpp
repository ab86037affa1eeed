#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "infaff/cli.hpp"

namespace fs = std::filesystem;
using infaff::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "infaff");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario_file(const std::string& name, const std::string& text) {
  auto dir = fs::temp_directory_path() / "infaff_cli_test";
  fs::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

nlohmann::json without_millis(nlohmann::json j) {
  for (auto& c : j["checks"]) c["millis"] = 0;
  return j;
}

}  // namespace

TEST_CASE("cli check exit codes") {
  auto ok = scenario_file("ok.txt",
                          "block eps vars 2 cap 1\n"
                          "point P = (0, 0)\n"
                          "check in-Dk P + (eps[1], eps[2]) - P k=1\n");
  auto bad = scenario_file("bad.txt",
                           "block d vars 1 cap 2\n"
                           "check in-Dk (d[1]) k=1\n");
  auto broken = scenario_file("broken.txt",
                              "block d vars 1 cap 2\n"
                              "point P = (1,\n");
  auto unknown = scenario_file("unknown.txt",
                               "block d vars 1 cap 2\n"
                               "check in-Dk Q k=1\n");

  CHECK(invoke({"check", ok}).code == 0);
  CHECK(invoke({"check", bad}).code == 1);

  auto b = invoke({"check", broken});
  CHECK(b.code == 2);
  CHECK(b.err.find(broken + ":2:14:") != std::string::npos);

  auto u = invoke({"check", unknown});
  CHECK(u.code == 2);
  CHECK(u.err.find(":2:13:") != std::string::npos);

  CHECK(invoke({"check", scenario_file("missing-dir/none.txt", "")}).code != 0);
}

TEST_CASE("cli json report") {
  auto bad = scenario_file("bad_json.txt",
                           "block d vars 1 cap 2\n"
                           "check in-Dk (d[1]) k=1\n"
                           "check in-Dk (d[1]) k=2\n");
  auto a = invoke({"check", bad, "--json", "--seed", "7"});
  auto b = invoke({"check", bad, "--json", "--seed", "7"});
  REQUIRE(a.code == 1);
  auto ja = nlohmann::json::parse(a.out);
  CHECK(without_millis(ja) == without_millis(nlohmann::json::parse(b.out)));

  // key order is part of the format
  auto pos = [&](const char* k) { return a.out.find(k); };
  CHECK(pos("\"version\"") < pos("\"checks\""));
  CHECK(pos("\"checks\"") < pos("\"summary\""));
  CHECK(pos("\"name\"") < pos("\"kind\""));
  CHECK(pos("\"kind\"") < pos("\"status\""));
  CHECK(pos("\"status\"") < pos("\"witness\""));
  CHECK(pos("\"witness\"") < pos("\"millis\""));

  REQUIRE(ja["checks"].size() == 2);
  CHECK(ja["checks"][0]["status"] == "fail");
  CHECK(ja["checks"][0]["witness"]["monomial"] == "d1^2");
  CHECK(ja["checks"][1]["status"] == "pass");
  CHECK(ja["checks"][1]["witness"].is_null());
  CHECK(ja["summary"] == nlohmann::json::parse(R"({"pass":1,"fail":1,"error":0})"));
}

TEST_CASE("cli eval") {
  auto f = scenario_file("eval.txt",
                         "block eps vars 2 cap 1\n"
                         "point P = (1, 2)\n");
  auto r = invoke({"eval", f, "--expr", "(1+eps[1])^2"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 + 2·eps1\n");

  r = invoke({"eval", f, "--expr", "P + (eps[2], 0)"});
  CHECK(r.code == 0);
  CHECK(r.out == "(1 + eps2, 2)\n");

  CHECK(invoke({"eval", f, "--expr", "R[1]"}).code == 2);
  CHECK(invoke({"eval", f, "--expr", "(1 +"}).code == 2);
  CHECK(invoke({"eval", f, "--expr", "1 / eps[1]"}).code == 2);
}
