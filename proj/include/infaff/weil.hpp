#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infaff/monomial.hpp"
#include "infaff/rational.hpp"

namespace infaff {

class WeilContext;
using ContextPtr = std::shared_ptr<const WeilContext>;

struct BlockSpec {
  std::string name;
  std::size_t count = 1;
  unsigned cap = 1;
};

struct Term {
  Monomial mono;
  Rational coef;

  friend bool operator==(const Term&, const Term&) = default;
};

/// A finite-dimensional nilpotent algebra over the rationals.
///
/// Two flavours are supported:
///  * truncated: generators are grouped in blocks; a monomial vanishes as soon
///    as its degree inside some block exceeds that block's cap. A single block
///    of n generators with cap k is the generic model of D_k(n).
///  * quotient: polynomial ring modulo homogeneous relations, truncated above a
///    degree cap. Each degree is reduced independently against a cached
///    reduced row-echelon basis of the span of {relation * monomial}.
///
/// Contexts are immutable after construction apart from the lazily filled
/// per-degree cache, which is guarded and filled idempotently.
class WeilContext {
 public:
  enum class Kind { truncated, quotient };

  static ContextPtr truncated(std::vector<BlockSpec> blocks);
  static ContextPtr quotient(std::vector<std::string> names, std::vector<Polynomial> relations,
                             unsigned degree_cap);

  Kind kind() const { return kind_; }
  std::size_t generator_count() const { return names_.size(); }
  const std::vector<std::string>& generator_names() const { return names_; }
  const std::string& generator_name(std::size_t i) const { return names_[i]; }

  /// Looks up `base` + `one_based_index` (e.g. "eps", 2 -> "eps2").
  std::optional<std::size_t> generator_index(std::string_view base,
                                             std::size_t one_based_index) const;

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const std::vector<Polynomial>& relations() const { return relations_; }
  unsigned degree_cap() const { return degree_cap_; }

  /// No monomial of larger total degree is ever nonzero in this context.
  unsigned max_degree() const { return max_degree_; }

  /// Reduces raw terms to the canonical normal form (sorted, no zeros).
  std::vector<Term> normalize(Polynomial::TermMap raw) const;

  /// True if the monomial survives truncation (caps / degree cap). For
  /// quotient contexts this does not mean the monomial is nonzero.
  bool monomial_fits(const Monomial& m) const;

  std::string monomial_to_string(const Monomial& m) const;

 private:
  struct DegreeBasis {
    // pivot monomial -> its replacement, i.e. pivot = sum(replacement) in the quotient
    std::map<Monomial, std::vector<Term>> reductions;
  };

  WeilContext() = default;
  const DegreeBasis& basis_for_degree(unsigned degree) const;
  std::shared_ptr<const DegreeBasis> build_basis(unsigned degree) const;

  Kind kind_ = Kind::truncated;
  std::vector<std::string> names_;
  std::vector<BlockSpec> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<Polynomial> relations_;
  unsigned degree_cap_ = 0;
  unsigned max_degree_ = 0;

  mutable std::mutex cache_mutex_;
  mutable std::vector<std::shared_ptr<const DegreeBasis>> cache_;
};

/// Element of a Weil context, always stored in normal form.
class WeilElement {
 public:
  explicit WeilElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}
  WeilElement(ContextPtr ctx, const Rational& constant);

  static WeilElement generator(ContextPtr ctx, std::size_t index);
  static WeilElement from_terms(ContextPtr ctx, Polynomial::TermMap raw);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational constant_term() const;
  bool is_constant() const;
  /// Lowest degree of a stored term; max_degree()+1 for zero.
  unsigned order() const;
  Rational coefficient(const Monomial& m) const;

  /// Re-runs normalization on the stored terms (idempotent).
  WeilElement renormalized() const;

  WeilElement operator-() const;
  WeilElement& operator+=(const WeilElement& other);
  WeilElement& operator-=(const WeilElement& other);
  WeilElement& operator*=(const WeilElement& other);
  friend WeilElement operator+(WeilElement a, const WeilElement& b) { return a += b; }
  friend WeilElement operator-(WeilElement a, const WeilElement& b) { return a -= b; }
  friend WeilElement operator*(const WeilElement& a, const WeilElement& b);
  friend WeilElement operator*(const Rational& s, const WeilElement& x);
  friend WeilElement operator*(const WeilElement& x, const Rational& s) { return s * x; }
  WeilElement& operator+=(const Rational& c);

  WeilElement pow(unsigned e) const;

  friend bool operator==(const WeilElement& a, const WeilElement& b);

  /// "1 + 2·eps1 - 1/2·eps1·eps2", terms in ascending degree-lex order.
  std::string to_string() const;

 private:
  WeilElement(ContextPtr ctx, std::vector<Term> terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {}
  void require_same_context(const WeilElement& other) const;

  ContextPtr ctx_;
  std::vector<Term> terms_;
};

/// Multiplicative inverse; throws NotInvertible for a zero constant term.
WeilElement invert(const WeilElement& x);

/// Square root with positive constant term; throws NotInvertible unless the
/// constant term is a positive rational square.
WeilElement sqrt(const WeilElement& x);

using WeilMatrix = std::vector<std::vector<WeilElement>>;

WeilMatrix mat_mul(const WeilMatrix& a, const WeilMatrix& b);
WeilMatrix mat_identity(const ContextPtr& ctx, std::size_t n);
/// Gauss-Jordan inverse; throws NotInvertible if the constant-term matrix is singular.
WeilMatrix mat_inverse(const WeilMatrix& m);

}  // namespace infaff
