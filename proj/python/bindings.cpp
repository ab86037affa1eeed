#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infaff/dsl.hpp"
#include "infaff/runner.hpp"
#include "infaff/selftest.hpp"

namespace py = pybind11;
using namespace infaff;

PYBIND11_MODULE(_infaff, m) {
  m.doc() = "Exact checks for infinitesimal affine structures";

  static py::exception<dsl::ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<Error> eval_error(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const dsl::ParseError& e) {
      py::tuple args = py::make_tuple(e.what(), e.line(), e.column());
      PyErr_SetObject(parse_error.ptr(), args.ptr());
    } catch (const Error& e) {
      eval_error(e.what());
    }
  });

  m.def("render", [](const std::string& text) { return dsl::render_scenario(dsl::parse_scenario(text)); },
        py::arg("text"), "Canonical form of a scenario.");

  m.def(
      "check_json",
      [](const std::string& text, std::uint64_t seed, bool timing) {
        dsl::Runtime rt(dsl::parse_scenario(text));
        CheckReport r;
        {
          py::gil_scoped_release release;
          r = rt.run(seed);
        }
        return r.to_json(timing);
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("timing") = true);

  m.def(
      "eval",
      [](const std::string& text, const std::string& expr) {
        dsl::Scenario s = dsl::parse_scenario(text);
        return dsl::Runtime(s).format(dsl::parse_expression(expr, s));
      },
      py::arg("text"), py::arg("expr"), "Normal form of an expression over the scenario's declarations.");

  m.def(
      "selftest_json",
      [](const std::string& grid, std::uint64_t seed, int criterion, bool timing) {
        if (grid != "small" && grid != "full") throw py::value_error("grid must be 'small' or 'full'");
        SelftestOptions o{grid == "full" ? Grid::full : Grid::small, seed};
        py::gil_scoped_release release;
        CheckReport r = criterion ? run_criterion(criterion, o) : run_selftest(o);
        return r.to_json(timing);
      },
      py::arg("grid") = "small", py::arg("seed") = 0, py::arg("criterion") = 0, py::arg("timing") = true);
}
