#include "infaff/rational.hpp"

#include <stdexcept>

namespace infaff {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digit_before = false;
  bool digit_after = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && !seen_slash) {
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
  }
  if (!digit_before || (seen_slash && !digit_after))
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  std::string s(text[0] == '+' ? text.substr(1) : text);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn = ::sqrt(num);
  mpz_class rd = ::sqrt(den);
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

Rational factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

}  // namespace infaff
