#include "infaff/random.hpp"

#include "infaff/errors.hpp"

namespace infaff {

std::size_t Sampler::below(std::size_t n) {
  if (n == 0) throw InvalidArgument("empty range");
  return static_cast<std::size_t>(next() % n);
}

long Sampler::between(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1)));
}

Rational Sampler::coefficient() {
  long p = between(-2, 2);
  long q = between(1, 5);
  return make_rational(p, q);
}

Rational Sampler::nonzero_coefficient() {
  long p = between(1, 2) * (coin() ? -1 : 1);
  long q = between(1, 5);
  return make_rational(p, q);
}

AffineWeights Sampler::weights(std::size_t n) {
  std::vector<Rational> w;
  Rational sum = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w.push_back(coefficient());
    sum += w.back();
  }
  w.push_back(1 - sum);
  return AffineWeights(std::move(w));
}

Polynomial Sampler::polynomial(std::size_t nvars, unsigned max_degree, unsigned min_degree) {
  Polynomial p(nvars);
  for (unsigned d = min_degree; d <= max_degree; ++d)
    for (const auto& m : monomials_of_degree(nvars, d))
      if (coin()) p.add_term(m, coefficient());
  return p;
}

PolyMap Sampler::poly_map(std::size_t n, std::size_t m, unsigned max_degree) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < m; ++i) comps.push_back(polynomial(n, max_degree));
  return PolyMap(n, std::move(comps));
}

Connection Sampler::connection(std::size_t n, unsigned max_degree) {
  Connection c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) c.set(i, j, k, polynomial(n, max_degree));
  return c;
}

std::vector<std::size_t> Sampler::index_map(std::size_t from, std::size_t to) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < from; ++i) h.push_back(below(to));
  return h;
}

}  // namespace infaff
