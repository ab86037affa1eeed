#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "infaff/monomial.hpp"
#include "infaff/point.hpp"

namespace infaff {

/// Highest Taylor order supported by taylor_eval.
inline constexpr unsigned kMaxTaylorOrder = 4;

/// Polynomial map R^n -> R^m.
class PolyMap {
 public:
  PolyMap(std::size_t input_dim, std::vector<Polynomial> components);

  static PolyMap identity(std::size_t n);
  /// x -> A x + b, A given row-major as m rows of n entries.
  static PolyMap affine(const std::vector<std::vector<Rational>>& a, std::span<const Rational> b = {});

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return components_.size(); }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& component(std::size_t i) const { return components_[i]; }
  int total_degree() const;

  friend bool operator==(const PolyMap&, const PolyMap&) = default;

 private:
  std::size_t input_dim_;
  std::vector<Polynomial> components_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree over constants, variables, + - * /, integer powers and sqrt.
struct Expr {
  enum class Op { constant, variable, add, sub, mul, div, neg, pow, sqrt };

  Op op = Op::constant;
  Rational value;
  std::size_t variable = 0;
  unsigned exponent = 0;
  std::vector<ExprPtr> args;

  static ExprPtr make_constant(const Rational& v);
  static ExprPtr make_variable(std::size_t index);
  static ExprPtr make_unary(Op op, ExprPtr a);
  static ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b);
  static ExprPtr make_pow(ExprPtr base, unsigned exponent);

  /// Converts to a polynomial when the tree has no division or sqrt.
  std::optional<Polynomial> to_polynomial(std::size_t nvars) const;
};

/// Map R^n -> R^m given by expression trees; evaluation only.
class ExprMap {
 public:
  ExprMap(std::size_t input_dim, std::vector<ExprPtr> components);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return components_.size(); }
  const std::vector<ExprPtr>& components() const { return components_; }

  std::optional<PolyMap> to_poly_map() const;

 private:
  std::size_t input_dim_;
  std::vector<ExprPtr> components_;
};

using MapRef = std::variant<PolyMap, ExprMap>;

std::size_t input_dim(const MapRef& f);
std::size_t output_dim(const MapRef& f);

WeilElement evaluate(const Polynomial& p, const PointVec& at);
WeilElement evaluate(const Expr& e, const PointVec& at);

PointVec eval_map(const PolyMap& f, const PointVec& p);
PointVec eval_map(const ExprMap& f, const PointVec& p);
PointVec eval_map(const MapRef& f, const PointVec& p);

/// outer ∘ inner.
PolyMap compose(const PolyMap& outer, const PolyMap& inner);

/// ℓ-th derivative ∂^ℓ f(Q) as an m × n^ℓ array, symmetric in the ℓ input slots.
class DerivativeTensor {
 public:
  DerivativeTensor(unsigned order, std::size_t input_dim, std::size_t output_dim, ContextPtr ctx);

  unsigned order() const { return order_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }

  const WeilElement& at(std::size_t out, std::span<const std::size_t> slots) const;
  void set(std::size_t out, std::span<const std::size_t> slots, WeilElement value);

  /// ∂^ℓ f(Q)[v_1, …, v_ℓ].
  PointVec apply(std::span<const PointVec> args) const;
  /// ∂^ℓ f(Q)[v]^ℓ.
  PointVec apply_power(const PointVec& v) const;

  bool is_symmetric() const;
  bool is_zero() const;

  friend bool operator==(const DerivativeTensor&, const DerivativeTensor&) = default;

 private:
  std::size_t flat_index(std::size_t out, std::span<const std::size_t> slots) const;

  unsigned order_;
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<WeilElement> data_;
};

DerivativeTensor derivative_tensor(const PolyMap& f, const PointVec& q, unsigned order);

/// Derivative of an arbitrary evaluable map at a rational point, read off
/// from one evaluation at point + (t_1, …, t_n) with t a generic order-ℓ jet.
/// The result lives in `target` (constant entries).
DerivativeTensor jet_derivative_tensor(const std::function<PointVec(const PointVec&)>& f,
                                       std::span<const Rational> point, unsigned order,
                                       const ContextPtr& target);

/// f(Q) + Σ_{ℓ=1..k} (1/ℓ!) ∂^ℓ f(Q)[d]^ℓ. Requires d to be a k-th order infinitesimal.
PointVec taylor_eval(const PolyMap& f, const PointVec& q, const PointVec& d, unsigned k);

}  // namespace infaff
