#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "infaff/iaffine.hpp"
#include "infaff/polymap.hpp"

namespace infaff {

/// Seeded generator for the randomized checks. Draws are mapped from the raw
/// 64-bit stream by hand so results do not depend on the standard library's
/// distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n);
  long between(long lo, long hi);
  bool coin() { return next() >> 63; }

  /// p/q with p in {-2..2}, q in {1..5}.
  Rational coefficient();
  Rational nonzero_coefficient();

  /// n weights; the first n-1 drawn with coefficient(), the last fixing Σ = 1.
  AffineWeights weights(std::size_t n);

  /// Each monomial of degree min_degree..max_degree kept with probability 1/2.
  Polynomial polynomial(std::size_t nvars, unsigned max_degree, unsigned min_degree = 0);
  PolyMap poly_map(std::size_t n, std::size_t m, unsigned max_degree);
  Connection connection(std::size_t n, unsigned max_degree);

  /// A map {0..from-1} -> {0..to-1}.
  std::vector<std::size_t> index_map(std::size_t from, std::size_t to);

 private:
  std::mt19937_64 engine_;
};

}  // namespace infaff
