#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infaff/neighborhoods.hpp"
#include "infaff/polymap.hpp"
#include "infaff/report.hpp"

namespace infaff {

/// Weights λ_1, …, λ_n with Σ λ_j = 1.
class AffineWeights {
 public:
  explicit AffineWeights(std::vector<Rational> values);

  /// e^n_k: 1 in slot k (0-based), 0 elsewhere.
  static AffineWeights basis(std::size_t n, std::size_t k);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  std::string to_string() const;

  friend bool operator==(const AffineWeights&, const AffineWeights&) = default;

 private:
  std::vector<Rational> values_;
};

/// Christoffel symbols Γ^i_{jk} at one point. Not forced symmetric, so that
/// raw (possibly broken) tensors can be fed to the checks.
class ChristoffelSymbols {
 public:
  ChristoffelSymbols(ContextPtr ctx, std::size_t dim);

  std::size_t dim() const { return dim_; }
  const WeilElement& at(std::size_t i, std::size_t j, std::size_t k) const;
  void set(std::size_t i, std::size_t j, std::size_t k, WeilElement value);

  /// Γ[u, v]^i = Σ_{j,k} Γ^i_{jk} u_j v_k.
  PointVec operator()(const PointVec& u, const PointVec& v) const;
  PointVec square(const PointVec& u) const { return (*this)(u, u); }
  bool is_symmetric() const;

 private:
  ContextPtr ctx_;
  std::size_t dim_;
  std::vector<WeilElement> data_;
};

using ChristoffelField = std::function<ChristoffelSymbols(const PointVec&)>;

/// Symmetric affine connection on points of R^n with polynomial Christoffel field.
class Connection {
 public:
  explicit Connection(std::size_t dim);

  std::size_t dim() const { return dim_; }
  /// Sets Γ^i_{jk} = Γ^i_{kj} (0-based indices).
  void set(std::size_t i, std::size_t j, std::size_t k, Polynomial p);
  const Polynomial& get(std::size_t i, std::size_t j, std::size_t k) const;
  /// Entry polynomials keyed by (i, j, k) with j <= k; zero entries omitted.
  std::map<std::array<std::size_t, 3>, Polynomial> entries() const;

  ChristoffelSymbols at(const PointVec& p) const;
  ChristoffelField field() const;

  friend bool operator==(const Connection&, const Connection&) = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j, std::size_t k) const;

  std::size_t dim_;
  std::vector<Polynomial> gamma_;
};

/// Inclusion ι and retraction r; e = ι∘r. Without ι, r itself is the idempotent on R^n.
struct RetractPair {
  std::optional<MapRef> iota;
  MapRef retraction;

  std::size_t ambient_dim() const;
  PointVec idempotent(const PointVec& x) const;
  /// e as a single polynomial map when both pieces are polynomial.
  std::optional<PolyMap> idempotent_poly() const;
};

/// One of the three i-affine actions on R^n together with its membership predicate.
class ActionHandle {
 public:
  enum class Kind { canonical, connection, retract };

  static ActionHandle canonical(unsigned k);
  static ActionHandle connection(const Connection& c);
  static ActionHandle christoffel_field(std::string label, ChristoffelField field);
  static ActionHandle retract(RetractPair rp);

  Kind kind() const { return kind_; }
  unsigned order() const { return k_; }
  const std::string& label() const { return label_; }
  const ChristoffelField& field() const { return field_; }
  const std::optional<RetractPair>& retract_pair() const { return retract_; }

  Membership membership(std::span<const PointVec> points) const;
  /// λ·⟨P_1, …, P_n⟩; throws PreconditionFailed when the tuple is not admissible.
  PointVec combine(const AffineWeights& w, std::span<const PointVec> points) const;

 private:
  ActionHandle(Kind kind, unsigned k) : kind_(kind), k_(k) {}

  Kind kind_;
  unsigned k_;
  std::string label_;
  ChristoffelField field_;
  std::optional<RetractPair> retract_;
};

PointVec canonical_combine(const AffineWeights& w, std::span<const PointVec> points);

/// λ(P, Q, S) = Q + S - P + Γ_P[Q - P, S - P].
PointVec connection_apply(const ChristoffelField& gamma, const PointVec& p, const PointVec& q, const PointVec& s);

/// Σλ_jP_j + ½(Γ_{P_1}[Σλ_jP_j - P_1]² - Σλ_jΓ_{P_1}[P_j - P_1]²).
PointVec connection_combine(const ChristoffelField& gamma, const AffineWeights& w, std::span<const PointVec> points);

/// e(Σ λ_j P_j) for points on the retract (e(P_j) = P_j).
PointVec retract_combine(const RetractPair& rp, const AffineWeights& w, std::span<const PointVec> points);

/// Γ̃_P[u,v] = ∂ι(P)⁻¹(Γ_{ι(P)}[∂ι(P)u, ∂ι(P)v] - ∂²ι(P)[u,v]).
ChristoffelSymbols pullback_connection(const ChristoffelField& gamma, const PolyMap& iota, const PointVec& p);
ChristoffelField pullback_field(ChristoffelField gamma, PolyMap iota);

/// Neighbourhood, associativity and projection for inner families λ^1..λ^K and outer μ.
CheckReport check_axioms(const ActionHandle& h, std::span<const PointVec> points,
                         std::span<const AffineWeights> inner, const AffineWeights& outer,
                         const std::string& prefix = "");

/// The connection λ(P,Q,S) := (-1,1,1)·⟨P,Q,S⟩ induced by a second-order action,
/// on generic first-order pairs at `base`.
CheckReport induced_connection_check(const ActionHandle& h, std::span<const Rational> base,
                                     const std::string& prefix = "");

/// ι(Γ̃-combine(points)) = Γ-combine(ι(points)).
CheckReport check_pullback_lemma(const ChristoffelField& gamma, const PolyMap& iota, std::span<const PointVec> points,
                                 std::span<const AffineWeights> weights, const std::string& prefix = "");

/// ∂e(P)² = ∂e(P), ∂²e(P)[∂e·,∂e·] + ∂e∘∂²e(P) = ∂²e(P), ∂e∘∂²e(P)[d]² = 0 along the retract,
/// and extensional idempotence at P + δ for generic second-order δ.
CheckReport check_idempotent_identities(const RetractPair& rp, std::span<const Rational> p,
                                        const std::string& prefix = "");

}  // namespace infaff
