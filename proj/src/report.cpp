#include "infaff/report.hpp"

#include <json.hpp>

namespace infaff {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::error: return "error";
  }
  return "error";
}

void CheckReport::add(std::string name, std::string kind, const Membership& m) {
  CheckEntry e;
  e.name = std::move(name);
  e.kind = std::move(kind);
  e.status = m.holds ? Status::pass : Status::fail;
  if (!m.holds) e.witness = m.witness;
  entries_.push_back(std::move(e));
}

void CheckReport::append(const CheckReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

Summary CheckReport::summary() const {
  Summary s;
  for (const auto& e : entries_) {
    switch (e.status) {
      case Status::pass: ++s.pass; break;
      case Status::fail: ++s.fail; break;
      case Status::error: ++s.error; break;
    }
  }
  return s;
}

bool CheckReport::all_pass() const {
  return first_problem() == nullptr;
}

const CheckEntry* CheckReport::first_problem() const {
  for (const auto& e : entries_)
    if (e.status != Status::pass) return &e;
  return nullptr;
}

std::string CheckReport::to_json(bool with_timing) const {
  using nlohmann::ordered_json;
  ordered_json checks = ordered_json::array();
  for (const auto& e : entries_) {
    ordered_json c;
    c["name"] = e.name;
    c["kind"] = e.kind;
    c["status"] = status_name(e.status);
    if (e.status == Status::fail && e.witness) {
      ordered_json w;
      w["location"] = e.witness->location;
      w["monomial"] = e.witness->monomial;
      w["coefficient"] = to_string(e.witness->coefficient);
      c["witness"] = std::move(w);
    } else {
      c["witness"] = nullptr;
    }
    c["millis"] = with_timing ? e.millis : 0;
    checks.push_back(std::move(c));
  }
  auto s = summary();
  ordered_json doc;
  doc["version"] = 1;
  doc["checks"] = std::move(checks);
  doc["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"error", s.error}};
  return doc.dump();
}

std::string CheckReport::to_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += std::string(status_name(e.status)) + "  " + e.name + "  (" + e.kind + ", " +
           std::to_string(e.millis) + " ms)";
    if (e.witness && e.witness->monomial.empty())
      out += "\n      witness: " + e.witness->location;
    else if (e.witness)
      out += "\n      witness: " + e.witness->location + " -> " + to_string(e.witness->coefficient) + "·" +
             e.witness->monomial;
    if (!e.message.empty()) out += "\n      " + e.message;
    out += "\n";
  }
  auto s = summary();
  out += std::to_string(s.pass) + " passed, " + std::to_string(s.fail) + " failed, " + std::to_string(s.error) +
         " errors\n";
  return out;
}

std::optional<Witness> difference_witness(const PointVec& a, const PointVec& b, const std::string& label) {
  if (a.dim() != b.dim()) return Witness{label + " dimension", "1", Rational(a.dim()) - Rational(b.dim())};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    WeilElement d = a[i] - b[i];
    if (d.is_zero()) continue;
    const Term& t = d.terms().front();
    return Witness{label + "[" + std::to_string(i + 1) + "]", d.context()->monomial_to_string(t.mono), t.coef};
  }
  return std::nullopt;
}

}  // namespace infaff
