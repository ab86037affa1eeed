#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "infaff/dsl.hpp"
#include "infaff/iaffine.hpp"
#include "infaff/neighborhoods.hpp"
#include "infaff/report.hpp"

namespace infaff::dsl {

/// A parsed scenario bound to concrete values. Construction evaluates every
/// declaration in order; evaluation faults surface as infaff::Error.
class Runtime {
 public:
  explicit Runtime(Scenario s);

  const ContextPtr& context() const { return ctx_; }

  /// Scalars come back as 1-dimensional vectors.
  PointVec evaluate(const dsl::Expr& e) const;
  /// Normal form of an expression: "1 + 2·eps1" or "(a, b)".
  std::string format(const dsl::Expr& e) const;

  /// Runs the checks in declaration order. Entries are named KIND@LINE,
  /// with sub-checks as KIND@LINE/part. Omitted weights are drawn from `seed`.
  CheckReport run(std::uint64_t seed = 0) const;

 private:
  void run_check(const CheckDecl& c, std::uint64_t seed, CheckReport& out) const;
  ActionHandle handle(const CheckDecl& c) const;
  std::vector<PointVec> points(const std::vector<dsl::Expr>& args) const;
  std::vector<Rational> constant(const dsl::Expr& e) const;

  Scenario scenario_;
  ContextPtr ctx_;
  std::map<std::string, PointVec> points_;
  std::map<std::string, MapRef> maps_;
  std::map<std::string, MultilinearForm> forms_;
  std::map<std::string, Connection> connections_;
  std::map<std::string, RetractPair> retracts_;
};

}  // namespace infaff::dsl
