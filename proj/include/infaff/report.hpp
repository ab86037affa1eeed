#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infaff/neighborhoods.hpp"

namespace infaff {

enum class Status { pass, fail, error };

std::string_view status_name(Status s);

struct CheckEntry {
  std::string name;
  std::string kind;
  Status status = Status::pass;
  std::optional<Witness> witness;
  std::string message;
  std::int64_t millis = 0;
};

struct Summary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t error = 0;
};

class CheckReport {
 public:
  void add(CheckEntry e) { entries_.push_back(std::move(e)); }
  void add(std::string name, std::string kind, const Membership& m);
  void append(const CheckReport& other);

  const std::vector<CheckEntry>& entries() const { return entries_; }
  std::vector<CheckEntry>& entries() { return entries_; }
  Summary summary() const;
  bool all_pass() const;
  /// First entry that did not pass, if any.
  const CheckEntry* first_problem() const;

  /// Schema: version, checks[name, kind, status, witness, millis], summary.
  std::string to_json(bool with_timing = true) const;
  std::string to_text() const;

 private:
  std::vector<CheckEntry> entries_;
};

/// Witness for a != b: the first differing coordinate and the leading term of a - b.
std::optional<Witness> difference_witness(const PointVec& a, const PointVec& b, const std::string& label);

}  // namespace infaff
