#include "infaff/monomial.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "infaff/errors.hpp"

namespace infaff {

Monomial::Monomial(std::size_t nvars) : exps_(nvars, 0) {}

Monomial::Monomial(std::vector<std::uint16_t> exponents) : exps_(std::move(exponents)) {
  degree_ = std::accumulate(exps_.begin(), exps_.end(), 0u);
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, unsigned power) {
  Monomial m(nvars);
  m.exps_.at(index) = static_cast<std::uint16_t>(power);
  m.degree_ = power;
  return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.exps_.size() != exps_.size()) throw DimensionMismatch("monomial variable counts differ");
  Monomial r = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  r.degree_ += other.degree_;
  return r;
}

namespace {

void enumerate_degree(std::size_t var, unsigned remaining, std::vector<std::uint16_t>& cur,
                      std::vector<Monomial>& out) {
  if (var + 1 == cur.size()) {
    cur[var] = static_cast<std::uint16_t>(remaining);
    out.emplace_back(cur);
    cur[var] = 0;
    return;
  }
  for (unsigned e = 0; e <= remaining; ++e) {
    cur[var] = static_cast<std::uint16_t>(e);
    enumerate_degree(var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back(0);
    return out;
  }
  std::vector<std::uint16_t> cur(nvars, 0);
  enumerate_degree(0, degree, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

Rational monomial_factorial(const Monomial& m) {
  Rational f = 1;
  for (auto e : m.exponents()) f *= factorial(e);
  return f;
}

std::string monomial_to_string(const Monomial& m, std::span<const std::string> names) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "·";
    s += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

// --- Polynomial ------------------------------------------------------------

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw DimensionMismatch("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::variable(nvars, index), 1);
  return p;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.degree());
}

int Polynomial::order() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.begin()->first.degree());
}

bool Polynomial::is_homogeneous() const { return order() == total_degree(); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != nvars_) throw DimensionMismatch("monomial does not match polynomial variable count");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.nvars_ != nvars_) throw DimensionMismatch("polynomial variable counts differ");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.nvars_ != nvars_) throw DimensionMismatch("polynomial variable counts differ");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionMismatch("polynomial variable counts differ");
  Polynomial r(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  Polynomial r(p.nvars_);
  if (s == 0) return r;
  for (const auto& [m, c] : p.terms_) r.terms_.emplace(m, s * c);
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= nvars_) throw DimensionMismatch("derivative variable out of range");
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    std::vector<std::uint16_t> e(m.exponents().begin(), m.exponents().end());
    Rational factor = c * e[var];
    --e[var];
    r.add_term(Monomial(std::move(e)), factor);
  }
  return r;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> values) const {
  if (values.size() != nvars_) throw DimensionMismatch("substitution needs one value per variable");
  std::size_t target = values.empty() ? 0 : values[0].nvars();
  for (const auto& v : values)
    if (v.nvars() != target) throw DimensionMismatch("substituted values use different variable counts");
  Polynomial r(target);
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(target, 1));
      while (cache.size() <= m[i]) cache.push_back(cache.back() * values[i]);
      t = t * cache[m[i]];
    }
    r += t;
  }
  return r;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) s += "-";
    } else {
      s += sgn(c) < 0 ? " - " : " + ";
    }
    first = false;
    bool unit = m.degree() == 0;
    if (unit) {
      s += infaff::to_string(mag);
    } else {
      if (mag != 1) s += infaff::to_string(mag) + "·";
      s += monomial_to_string(m, names);
    }
  }
  return s;
}

}  // namespace infaff
