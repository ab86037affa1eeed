#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infaff/point.hpp"

namespace infaff {

/// A nonzero product found while testing a vanishing condition.
struct Witness {
  std::string location;
  std::string monomial;
  Rational coefficient;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Membership {
  bool holds = true;
  std::optional<Witness> witness;

  explicit operator bool() const { return holds; }
};

/// r-linear form on Q^n, stored as sparse coefficients φ_{i_1…i_r} (0-based indices).
class MultilinearForm {
 public:
  using Index = std::vector<std::size_t>;

  MultilinearForm(std::size_t arity, std::size_t dim);

  /// The functional v_1[i_1]⋯v_r[i_r].
  static MultilinearForm coordinate_product(std::size_t dim, Index idx);
  /// Σ_σ v_1[i_σ(1)]⋯v_r[i_σ(r)] over distinct rearrangements of idx.
  static MultilinearForm symmetrized_product(std::size_t dim, Index idx);
  static MultilinearForm determinant(std::size_t dim);

  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return dim_; }
  const std::map<Index, Rational>& coefficients() const { return coefs_; }
  void set(const Index& idx, const Rational& value);
  Rational get(const Index& idx) const;
  bool is_symmetric() const;

  friend bool operator==(const MultilinearForm&, const MultilinearForm&) = default;

 private:
  std::size_t arity_;
  std::size_t dim_;
  std::map<Index, Rational> coefs_;
};

WeilElement eval_form(const MultilinearForm& phi, std::span<const PointVec> vs);

/// All index tuples of length r over 0..n-1 (coordinate-product basis of r-forms).
std::vector<MultilinearForm::Index> index_grid(std::size_t n, std::size_t r);
/// Non-decreasing index tuples (symmetrized-product basis of symmetric r-forms).
std::vector<MultilinearForm::Index> index_multisets(std::size_t n, std::size_t r);

Membership check_D_k(const PointVec& v, unsigned k);
Membership check_DN_k(std::span<const PointVec> vs);
Membership check_A_k(std::span<const PointVec> points, unsigned k);
Membership check_nilsquare(std::span<const PointVec> points);
/// Membership for the weaker structure cut out by symmetric (k+1)-forms only.
Membership check_A_k_symmetric(std::span<const PointVec> points, unsigned k);

inline bool in_D_k(const PointVec& v, unsigned k) { return check_D_k(v, k).holds; }
inline bool in_DN_k(std::span<const PointVec> vs) { return check_DN_k(vs).holds; }
inline bool in_A_k(std::span<const PointVec> points, unsigned k) { return check_A_k(points, k).holds; }
inline bool in_nilsquare(std::span<const PointVec> points) { return check_nilsquare(points).holds; }

struct GenericVector {
  ContextPtr ctx;
  PointVec vector;
};

struct GenericTuple {
  ContextPtr ctx;
  std::vector<PointVec> points;
};

/// Block "d" of n generators with cap k; the vector (d1, …, dn).
GenericVector generic_Dk_vector(std::size_t n, unsigned k);

/// One block "u" of n(m-1) generators with cap k; P_1 = base, P_j = base + j-th slice.
GenericTuple generic_Ak_tuple(std::size_t n, unsigned k, std::size_t m, std::span<const Rational> base = {});

/// Quotient over u{j}_{a}, j = 2..m, by the pairwise first-order relations. P_1 = 0, P_j = u_j.
GenericTuple generic_nilsquare_tuple(std::size_t n, std::size_t m);

/// Quotient imposing only the symmetric (k+1)-form relations on differences.
GenericTuple generic_symmetric_Ak_tuple(std::size_t n, unsigned k, std::size_t m,
                                        std::span<const Rational> base = {});

}  // namespace infaff
