#include "infaff/polymap.hpp"

#include <algorithm>

#include "infaff/errors.hpp"
#include "infaff/neighborhoods.hpp"

namespace infaff {

// --- PolyMap ---------------------------------------------------------------

PolyMap::PolyMap(std::size_t input_dim, std::vector<Polynomial> components)
    : input_dim_(input_dim), components_(std::move(components)) {
  if (input_dim_ == 0 || components_.empty()) throw DimensionMismatch("maps need positive dimensions");
  for (const auto& c : components_)
    if (c.nvars() != input_dim_) throw DimensionMismatch("component variable count differs from input dimension");
}

PolyMap PolyMap::identity(std::size_t n) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
  return PolyMap(n, std::move(comps));
}

PolyMap PolyMap::affine(const std::vector<std::vector<Rational>>& a, std::span<const Rational> b) {
  if (a.empty() || a[0].empty()) throw DimensionMismatch("empty matrix");
  const std::size_t n = a[0].size();
  if (!b.empty() && b.size() != a.size()) throw DimensionMismatch("offset length differs from row count");
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != n) throw DimensionMismatch("ragged matrix");
    Polynomial p(n);
    for (std::size_t j = 0; j < n; ++j) p.add_term(Monomial::variable(n, j), a[i][j]);
    if (!b.empty()) p.add_term(Monomial(n), b[i]);
    comps.push_back(std::move(p));
  }
  return PolyMap(n, std::move(comps));
}

int PolyMap::total_degree() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.total_degree());
  return d;
}

// --- Expr ------------------------------------------------------------------

ExprPtr Expr::make_constant(const Rational& v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::constant;
  e->value = v;
  return e;
}

ExprPtr Expr::make_variable(std::size_t index) {
  auto e = std::make_shared<Expr>();
  e->op = Op::variable;
  e->variable = index;
  return e;
}

ExprPtr Expr::make_unary(Op op, ExprPtr a) {
  if (op != Op::neg && op != Op::sqrt) throw InvalidArgument("not a unary operator");
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = {std::move(a)};
  return e;
}

ExprPtr Expr::make_binary(Op op, ExprPtr a, ExprPtr b) {
  if (op != Op::add && op != Op::sub && op != Op::mul && op != Op::div)
    throw InvalidArgument("not a binary operator");
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::make_pow(ExprPtr base, unsigned exponent) {
  auto e = std::make_shared<Expr>();
  e->op = Op::pow;
  e->exponent = exponent;
  e->args = {std::move(base)};
  return e;
}

std::optional<Polynomial> Expr::to_polynomial(std::size_t nvars) const {
  switch (op) {
    case Op::constant:
      return Polynomial::constant(nvars, value);
    case Op::variable:
      if (variable >= nvars) throw DimensionMismatch("expression variable out of range");
      return Polynomial::variable(nvars, variable);
    case Op::neg: {
      auto a = args[0]->to_polynomial(nvars);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Op::pow: {
      auto a = args[0]->to_polynomial(nvars);
      if (!a) return std::nullopt;
      return a->pow(exponent);
    }
    case Op::add:
    case Op::sub:
    case Op::mul: {
      auto a = args[0]->to_polynomial(nvars);
      auto b = args[1]->to_polynomial(nvars);
      if (!a || !b) return std::nullopt;
      if (op == Op::add) return *a + *b;
      if (op == Op::sub) return *a - *b;
      return *a * *b;
    }
    case Op::div: {
      // division by a nonzero constant stays polynomial
      auto a = args[0]->to_polynomial(nvars);
      auto b = args[1]->to_polynomial(nvars);
      if (!a || !b || b->total_degree() != 0) return std::nullopt;
      return Rational(1 / b->terms().begin()->second) * *a;
    }
    case Op::sqrt:
      return std::nullopt;
  }
  return std::nullopt;
}

ExprMap::ExprMap(std::size_t input_dim, std::vector<ExprPtr> components)
    : input_dim_(input_dim), components_(std::move(components)) {
  if (input_dim_ == 0 || components_.empty()) throw DimensionMismatch("maps need positive dimensions");
}

std::optional<PolyMap> ExprMap::to_poly_map() const {
  std::vector<Polynomial> comps;
  for (const auto& c : components_) {
    auto p = c->to_polynomial(input_dim_);
    if (!p) return std::nullopt;
    comps.push_back(std::move(*p));
  }
  return PolyMap(input_dim_, std::move(comps));
}

std::size_t input_dim(const MapRef& f) {
  return std::visit([](const auto& m) { return m.input_dim(); }, f);
}

std::size_t output_dim(const MapRef& f) {
  return std::visit([](const auto& m) { return m.output_dim(); }, f);
}

// --- evaluation ------------------------------------------------------------

WeilElement evaluate(const Polynomial& p, const PointVec& at) {
  if (p.nvars() != at.dim()) throw DimensionMismatch("polynomial expects " + std::to_string(p.nvars()) +
                                                     " arguments, got " + std::to_string(at.dim()));
  const ContextPtr& ctx = at.context();
  std::vector<std::vector<WeilElement>> powers(at.dim());
  WeilElement result(ctx);
  for (const auto& [m, c] : p.terms()) {
    WeilElement t(ctx, c);
    for (std::size_t i = 0; i < m.size() && !t.is_zero(); ++i) {
      if (m[i] == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.emplace_back(ctx, 1);
      while (cache.size() <= m[i]) cache.push_back(cache.back() * at[i]);
      t = t * cache[m[i]];
    }
    result += t;
  }
  return result;
}

WeilElement evaluate(const Expr& e, const PointVec& at) {
  const ContextPtr& ctx = at.context();
  switch (e.op) {
    case Expr::Op::constant:
      return WeilElement(ctx, e.value);
    case Expr::Op::variable:
      if (e.variable >= at.dim()) throw DimensionMismatch("expression variable out of range");
      return at[e.variable];
    case Expr::Op::neg:
      return -evaluate(*e.args[0], at);
    case Expr::Op::sqrt:
      return sqrt(evaluate(*e.args[0], at));
    case Expr::Op::pow:
      return evaluate(*e.args[0], at).pow(e.exponent);
    case Expr::Op::add:
      return evaluate(*e.args[0], at) + evaluate(*e.args[1], at);
    case Expr::Op::sub:
      return evaluate(*e.args[0], at) - evaluate(*e.args[1], at);
    case Expr::Op::mul:
      return evaluate(*e.args[0], at) * evaluate(*e.args[1], at);
    case Expr::Op::div:
      return evaluate(*e.args[0], at) * invert(evaluate(*e.args[1], at));
  }
  throw InvalidArgument("unknown expression node");
}

PointVec eval_map(const PolyMap& f, const PointVec& p) {
  if (p.dim() != f.input_dim())
    throw DimensionMismatch("map expects dimension " + std::to_string(f.input_dim()) + ", got " +
                            std::to_string(p.dim()));
  std::vector<WeilElement> out;
  out.reserve(f.output_dim());
  for (const auto& c : f.components()) out.push_back(evaluate(c, p));
  return PointVec(p.context(), std::move(out));
}

PointVec eval_map(const ExprMap& f, const PointVec& p) {
  if (p.dim() != f.input_dim())
    throw DimensionMismatch("map expects dimension " + std::to_string(f.input_dim()) + ", got " +
                            std::to_string(p.dim()));
  std::vector<WeilElement> out;
  out.reserve(f.output_dim());
  for (const auto& c : f.components()) out.push_back(evaluate(*c, p));
  return PointVec(p.context(), std::move(out));
}

PointVec eval_map(const MapRef& f, const PointVec& p) {
  return std::visit([&p](const auto& m) { return eval_map(m, p); }, f);
}

PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
  if (inner.output_dim() != outer.input_dim())
    throw DimensionMismatch("inner map output dimension " + std::to_string(inner.output_dim()) +
                            " differs from outer input dimension " + std::to_string(outer.input_dim()));
  std::vector<Polynomial> comps;
  comps.reserve(outer.output_dim());
  for (const auto& c : outer.components()) comps.push_back(c.substitute(inner.components()));
  return PolyMap(inner.input_dim(), std::move(comps));
}

// --- derivatives -----------------------------------------------------------

DerivativeTensor::DerivativeTensor(unsigned order, std::size_t input_dim, std::size_t output_dim,
                                   ContextPtr ctx)
    : order_(order), input_dim_(input_dim), output_dim_(output_dim) {
  if (order == 0) throw InvalidArgument("derivative order must be at least 1");
  std::size_t size = output_dim;
  for (unsigned i = 0; i < order; ++i) size *= input_dim;
  data_.assign(size, WeilElement(std::move(ctx)));
}

std::size_t DerivativeTensor::flat_index(std::size_t out, std::span<const std::size_t> slots) const {
  if (slots.size() != order_) throw DimensionMismatch("slot count differs from derivative order");
  if (out >= output_dim_) throw DimensionMismatch("output index out of range");
  std::size_t idx = out;
  for (auto s : slots) {
    if (s >= input_dim_) throw DimensionMismatch("input index out of range");
    idx = idx * input_dim_ + s;
  }
  return idx;
}

const WeilElement& DerivativeTensor::at(std::size_t out, std::span<const std::size_t> slots) const {
  return data_[flat_index(out, slots)];
}

void DerivativeTensor::set(std::size_t out, std::span<const std::size_t> slots, WeilElement value) {
  data_[flat_index(out, slots)] = std::move(value);
}

namespace {

// Calls fn(slots) for every index tuple in {0..n-1}^order.
template <typename Fn>
void for_each_slot_tuple(std::size_t n, unsigned order, Fn&& fn) {
  std::vector<std::size_t> slots(order, 0);
  for (;;) {
    fn(std::span<const std::size_t>(slots));
    std::size_t pos = order;
    while (pos > 0) {
      --pos;
      if (++slots[pos] < n) break;
      slots[pos] = 0;
      if (pos == 0) return;
    }
    if (order == 0) return;
  }
}

}  // namespace

PointVec DerivativeTensor::apply(std::span<const PointVec> args) const {
  if (args.size() != order_) throw DimensionMismatch("argument count differs from derivative order");
  const ContextPtr& ctx = args[0].context();
  for (const auto& a : args)
    if (a.dim() != input_dim_) throw DimensionMismatch("argument dimension differs from input dimension");
  std::vector<WeilElement> out(output_dim_, WeilElement(ctx));
  for_each_slot_tuple(input_dim_, order_, [&](std::span<const std::size_t> slots) {
    WeilElement prod(ctx, 1);
    for (unsigned r = 0; r < order_ && !prod.is_zero(); ++r) prod = prod * args[r][slots[r]];
    if (prod.is_zero()) return;
    for (std::size_t i = 0; i < output_dim_; ++i) {
      const auto& coef = at(i, slots);
      if (!coef.is_zero()) out[i] += coef * prod;
    }
  });
  return PointVec(ctx, std::move(out));
}

PointVec DerivativeTensor::apply_power(const PointVec& v) const {
  std::vector<PointVec> args(order_, v);
  return apply(args);
}

bool DerivativeTensor::is_symmetric() const {
  bool symmetric = true;
  for_each_slot_tuple(input_dim_, order_, [&](std::span<const std::size_t> slots) {
    if (!symmetric) return;
    std::vector<std::size_t> sorted(slots.begin(), slots.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < output_dim_; ++i)
      if (!(at(i, slots) == at(i, sorted))) symmetric = false;
  });
  return symmetric;
}

bool DerivativeTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const WeilElement& e) { return e.is_zero(); });
}

DerivativeTensor derivative_tensor(const PolyMap& f, const PointVec& q, unsigned order) {
  if (q.dim() != f.input_dim()) throw DimensionMismatch("base point dimension differs from map input");
  DerivativeTensor t(order, f.input_dim(), f.output_dim(), q.context());
  std::map<std::vector<std::size_t>, std::vector<WeilElement>> cache;
  for_each_slot_tuple(f.input_dim(), order, [&](std::span<const std::size_t> slots) {
    std::vector<std::size_t> key(slots.begin(), slots.end());
    std::sort(key.begin(), key.end());
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<WeilElement> values;
      for (const auto& comp : f.components()) {
        Polynomial d = comp;
        for (auto s : key) d = d.derivative(s);
        values.push_back(evaluate(d, q));
      }
      it = cache.emplace(key, std::move(values)).first;
    }
    for (std::size_t i = 0; i < f.output_dim(); ++i) t.set(i, slots, it->second[i]);
  });
  return t;
}

DerivativeTensor jet_derivative_tensor(const std::function<PointVec(const PointVec&)>& f,
                                       std::span<const Rational> point, unsigned order,
                                       const ContextPtr& target) {
  const std::size_t n = point.size();
  auto jet_ctx = WeilContext::truncated({BlockSpec{"t", n, order}});
  std::vector<WeilElement> coords;
  for (std::size_t i = 0; i < n; ++i)
    coords.push_back(WeilElement(jet_ctx, point[i]) + WeilElement::generator(jet_ctx, i));
  PointVec value = f(PointVec(jet_ctx, std::move(coords)));
  DerivativeTensor t(order, n, value.dim(), target);
  // coefficient of t^α in f(P + t) is ∂^α f(P) / α!
  for_each_slot_tuple(n, order, [&](std::span<const std::size_t> slots) {
    std::vector<std::uint16_t> exps(n, 0);
    for (auto s : slots) ++exps[s];
    Monomial m(std::move(exps));
    Rational scale = monomial_factorial(m);
    for (std::size_t i = 0; i < value.dim(); ++i)
      t.set(i, slots, WeilElement(target, scale * value[i].coefficient(m)));
  });
  return t;
}

PointVec taylor_eval(const PolyMap& f, const PointVec& q, const PointVec& d, unsigned k) {
  if (k == 0 || k > kMaxTaylorOrder)
    throw InvalidArgument("Taylor order must be in 1.." + std::to_string(kMaxTaylorOrder));
  if (q.dim() != f.input_dim() || d.dim() != f.input_dim())
    throw DimensionMismatch("Taylor base point and increment must match the map input dimension");
  if (!in_D_k(d, k)) throw PreconditionFailed("increment is not a k-th order infinitesimal for k=" + std::to_string(k));
  PointVec sum = eval_map(f, q);
  for (unsigned l = 1; l <= k; ++l) {
    PointVec term = derivative_tensor(f, q, l).apply_power(d);
    sum += Rational(1) / factorial(l) * term;
  }
  return sum;
}

}  // namespace infaff
