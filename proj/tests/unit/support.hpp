#pragma once

#include <doctest.h>

#include <string>

#include "infaff/polymap.hpp"
#include "infaff/random.hpp"
#include "infaff/weil.hpp"
#include "oracles.hpp"

namespace testsupport {

using namespace infaff;

inline oracle::Dense to_dense(const WeilElement& x) {
  oracle::Dense d;
  for (const auto& t : x.terms()) {
    oracle::Exps e(t.mono.exponents().begin(), t.mono.exponents().end());
    d[e] = t.coef;
  }
  return d;
}

inline oracle::Dense to_dense(const Polynomial& p) {
  oracle::Dense d;
  for (const auto& [m, c] : p.terms()) d[oracle::Exps(m.exponents().begin(), m.exponents().end())] = c;
  return d;
}

inline WeilElement from_dense(const ContextPtr& ctx, const oracle::Dense& d) {
  Polynomial::TermMap raw;
  for (const auto& [e, c] : d) raw[Monomial(std::vector<std::uint16_t>(e.begin(), e.end()))] = c;
  return WeilElement::from_terms(ctx, std::move(raw));
}

inline std::vector<oracle::Block> blocks_of(const ContextPtr& ctx) {
  std::vector<oracle::Block> out;
  int first = 0;
  for (const auto& b : ctx->blocks()) {
    out.push_back({first, static_cast<int>(b.count), static_cast<int>(b.cap)});
    first += static_cast<int>(b.count);
  }
  return out;
}

inline WeilElement gen(const ContextPtr& ctx, const std::string& name) {
  for (std::size_t i = 0; i < ctx->generator_count(); ++i)
    if (ctx->generator_name(i) == name) return WeilElement::generator(ctx, i);
  FAIL("no generator " << name);
  return WeilElement(ctx);
}

inline WeilElement c(const ContextPtr& ctx, long p, long q = 1) { return WeilElement(ctx, make_rational(p, q)); }

// Random element with every monomial up to max_degree drawn with probability 1/2.
inline WeilElement random_element(Sampler& s, const ContextPtr& ctx, unsigned max_degree) {
  Polynomial p = s.polynomial(ctx->generator_count(), max_degree);
  return WeilElement::from_terms(ctx, p.terms());
}

inline Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

}  // namespace testsupport
