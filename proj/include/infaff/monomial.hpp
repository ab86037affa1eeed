#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "infaff/rational.hpp"

namespace infaff {

/// Exponent vector over a fixed, ordered set of variables.
///
/// Ordering is degree-lexicographic: total degree first, then the exponent
/// vectors compared lexicographically.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars);
  explicit Monomial(std::vector<std::uint16_t> exponents);

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1);

  std::size_t size() const { return exps_.size(); }
  unsigned degree() const { return degree_; }
  std::uint16_t operator[](std::size_t i) const { return exps_[i]; }
  std::span<const std::uint16_t> exponents() const { return exps_; }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.exps_ == b.exps_;
  }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    // degree first; within a degree x1 sorts before x2 (x1·x2 before x2^2)
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    return b.exps_ <=> a.exps_;
  }

 private:
  std::vector<std::uint16_t> exps_;
  unsigned degree_ = 0;
};

/// All monomials of total degree exactly `degree` in `nvars` variables, ascending.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree);

/// Product over variables of exponent!, the multiplicity factor linking
/// Taylor coefficients to mixed partial derivatives.
Rational monomial_factorial(const Monomial& m);

/// "x1^2·x3" style rendering; the unit monomial renders as "1".
std::string monomial_to_string(const Monomial& m, std::span<const std::string> names);

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  /// Lowest degree among the stored terms, -1 for zero.
  int order() const;
  bool is_homogeneous() const;
  Rational coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, const Polynomial& p);
  Polynomial pow(unsigned e) const;

  Polynomial derivative(std::size_t var) const;

  /// Substitutes values[i] for variable i. All values share one variable count,
  /// which becomes the variable count of the result.
  Polynomial substitute(std::span<const Polynomial> values) const;

  std::string to_string(std::span<const std::string> names) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

}  // namespace infaff
