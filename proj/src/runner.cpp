#include "infaff/runner.hpp"

#include <chrono>

#include "infaff/random.hpp"

namespace infaff::dsl {

namespace {

using DExpr = dsl::Expr;

ContextPtr make_context(const Scenario& s) {
  std::vector<BlockSpec> blocks;
  for (const auto& st : s.statements) {
    if (const auto* b = std::get_if<BlockDecl>(&st))
      blocks.push_back({b->name, static_cast<std::size_t>(b->vars), static_cast<unsigned>(b->cap)});
    if (const auto* q = std::get_if<QuotientDecl>(&st)) {
      std::vector<std::string> names;
      for (long i = 1; i <= q->vars; ++i) names.push_back(q->name + std::to_string(i));
      std::vector<Polynomial> relations;
      for (const auto& r : q->relations)
        relations.push_back(expr_to_polynomial(r, q->vars, [&](const DExpr& leaf) -> std::optional<std::size_t> {
          if (leaf.kind == DExpr::Kind::index && leaf.name == q->name) return static_cast<std::size_t>(leaf.index - 1);
          return std::nullopt;
        }));
      return WeilContext::quotient(std::move(names), std::move(relations), static_cast<unsigned>(q->degcap));
    }
  }
  return WeilContext::truncated(std::move(blocks));
}

ExprPtr to_map_expr(const DExpr& e, const std::vector<std::string>& params) {
  using Op = infaff::Expr::Op;
  switch (e.kind) {
    case DExpr::Kind::number: return infaff::Expr::make_constant(e.value);
    case DExpr::Kind::name: {
      auto it = std::find(params.begin(), params.end(), e.name);
      return infaff::Expr::make_variable(static_cast<std::size_t>(it - params.begin()));
    }
    case DExpr::Kind::neg: return infaff::Expr::make_unary(Op::neg, to_map_expr(e.args[0], params));
    case DExpr::Kind::sqrt: return infaff::Expr::make_unary(Op::sqrt, to_map_expr(e.args[0], params));
    case DExpr::Kind::pow: return infaff::Expr::make_pow(to_map_expr(e.args[0], params), e.exponent);
    case DExpr::Kind::add:
    case DExpr::Kind::sub:
    case DExpr::Kind::mul:
    case DExpr::Kind::div: {
      Op op = e.kind == DExpr::Kind::add   ? Op::add
              : e.kind == DExpr::Kind::sub ? Op::sub
              : e.kind == DExpr::Kind::mul ? Op::mul
                                           : Op::div;
      return infaff::Expr::make_binary(op, to_map_expr(e.args[0], params), to_map_expr(e.args[1], params));
    }
    default: break;
  }
  throw InvalidArgument("unsupported expression in map body: " + render_expr(e));
}

MapRef make_map(const MapDecl& d) {
  const std::size_t n = d.params.size();
  auto var_of = [&](const DExpr& leaf) -> std::optional<std::size_t> {
    if (leaf.kind != DExpr::Kind::name) return std::nullopt;
    auto it = std::find(d.params.begin(), d.params.end(), leaf.name);
    if (it == d.params.end()) return std::nullopt;
    return static_cast<std::size_t>(it - d.params.begin());
  };
  try {
    std::vector<Polynomial> comps;
    for (const auto& e : d.body) comps.push_back(expr_to_polynomial(e, n, var_of));
    return PolyMap(n, std::move(comps));
  } catch (const InvalidArgument&) {
    std::vector<ExprPtr> comps;
    for (const auto& e : d.body) comps.push_back(to_map_expr(e, d.params));
    return ExprMap(n, std::move(comps));
  }
}

PointVec scalar(const WeilElement& x) { return PointVec(x.context(), {x}); }

const WeilElement& as_scalar(const PointVec& v) {
  if (v.dim() != 1) throw DimensionMismatch("expected a scalar, got a vector of dimension " + std::to_string(v.dim()));
  return v[0];
}

std::vector<AffineWeights> weight_list(const std::vector<DExpr>& ws) {
  std::vector<AffineWeights> out;
  for (const auto& w : ws) out.emplace_back(*constant_vector(w));
  return out;
}

}  // namespace

Runtime::Runtime(Scenario s) : scenario_(s), ctx_(make_context(s)) {
  for (const auto& st : s.statements) {
    if (const auto* p = std::get_if<PointDecl>(&st)) {
      points_.emplace(p->name, evaluate(p->value));
    } else if (const auto* m = std::get_if<MapDecl>(&st)) {
      maps_.emplace(m->name, make_map(*m));
    } else if (const auto* f = std::get_if<FormDecl>(&st)) {
      MultilinearForm phi(f->arity, f->dim);
      for (const auto& e : f->entries) {
        MultilinearForm::Index idx;
        for (long i : e.index) idx.push_back(static_cast<std::size_t>(i - 1));
        phi.set(idx, e.value);
      }
      forms_.emplace(f->name, std::move(phi));
    } else if (const auto* c = std::get_if<ConnectionDecl>(&st)) {
      Connection conn(c->dim);
      const auto n = static_cast<std::size_t>(c->dim);
      for (const auto& g : c->entries) {
        Polynomial p = expr_to_polynomial(g.value, n, [](const DExpr& leaf) -> std::optional<std::size_t> {
          if (leaf.kind == DExpr::Kind::index && leaf.name == "x") return static_cast<std::size_t>(leaf.index - 1);
          return std::nullopt;
        });
        conn.set(g.i - 1, g.j - 1, g.k - 1, std::move(p));
      }
      connections_.emplace(c->name, std::move(conn));
    } else if (const auto* r = std::get_if<RetractDecl>(&st)) {
      RetractPair rp{std::nullopt, maps_.at(r->r)};
      if (r->iota) rp.iota = maps_.at(*r->iota);
      retracts_.emplace(r->name, std::move(rp));
    }
  }
}

PointVec Runtime::evaluate(const DExpr& e) const {
  switch (e.kind) {
    case DExpr::Kind::number:
      return scalar(WeilElement(ctx_, e.value));
    case DExpr::Kind::name:
      return points_.at(e.name);
    case DExpr::Kind::index: {
      if (auto it = points_.find(e.name); it != points_.end()) return scalar(it->second[e.index - 1]);
      auto g = ctx_->generator_index(e.name, static_cast<std::size_t>(e.index));
      if (!g) throw InvalidArgument("unknown generator " + e.name + "[" + std::to_string(e.index) + "]");
      return scalar(WeilElement::generator(ctx_, *g));
    }
    case DExpr::Kind::call: {
      std::vector<PointVec> args;
      for (const auto& a : e.args) args.push_back(evaluate(a));
      if (auto f = maps_.find(e.name); f != maps_.end()) {
        PointVec in = args[0];
        if (args.size() > 1) {
          std::vector<WeilElement> coords;
          for (const auto& a : args) coords.push_back(as_scalar(a));
          in = PointVec(ctx_, std::move(coords));
        }
        return eval_map(f->second, in);
      }
      return scalar(eval_form(forms_.at(e.name), args));
    }
    case DExpr::Kind::tuple: {
      std::vector<WeilElement> coords;
      for (const auto& a : e.args) coords.push_back(as_scalar(evaluate(a)));
      return PointVec(ctx_, std::move(coords));
    }
    case DExpr::Kind::neg:
      return -evaluate(e.args[0]);
    case DExpr::Kind::add:
      return evaluate(e.args[0]) + evaluate(e.args[1]);
    case DExpr::Kind::sub:
      return evaluate(e.args[0]) - evaluate(e.args[1]);
    case DExpr::Kind::mul: {
      PointVec a = evaluate(e.args[0]), b = evaluate(e.args[1]);
      if (a.dim() == 1) return a[0] * b;
      return as_scalar(b) * a;
    }
    case DExpr::Kind::div: {
      PointVec a = evaluate(e.args[0]);
      return invert(as_scalar(evaluate(e.args[1]))) * a;
    }
    case DExpr::Kind::pow:
      return scalar(as_scalar(evaluate(e.args[0])).pow(e.exponent));
    case DExpr::Kind::sqrt:
      return scalar(sqrt(as_scalar(evaluate(e.args[0]))));
  }
  throw InvalidArgument("cannot evaluate " + render_expr(e));
}

std::string Runtime::format(const DExpr& e) const {
  PointVec v = evaluate(e);
  if (v.dim() == 1) return v[0].to_string();
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

std::vector<PointVec> Runtime::points(const std::vector<DExpr>& args) const {
  std::vector<PointVec> out;
  for (const auto& a : args) out.push_back(evaluate(a));
  return out;
}

std::vector<Rational> Runtime::constant(const DExpr& e) const { return *constant_vector(e); }

ActionHandle Runtime::handle(const CheckDecl& c) const {
  if (c.handle == "canonical") return ActionHandle::canonical(static_cast<unsigned>(c.k.value_or(1)));
  if (c.handle == "connection") return ActionHandle::connection(connections_.at(c.target));
  return ActionHandle::retract(retracts_.at(c.target));
}

void Runtime::run_check(const CheckDecl& c, std::uint64_t seed, CheckReport& out) const {
  const std::string name = c.kind + "@" + std::to_string(c.span.pos.line);
  const auto k = static_cast<unsigned>(c.k.value_or(1));
  auto single = [&](auto&& body) {
    CheckEntry e;
    e.name = name;
    e.kind = c.kind;
    auto t0 = std::chrono::steady_clock::now();
    try {
      Membership m = body();
      e.status = m.holds ? Status::pass : Status::fail;
      if (!m.holds) e.witness = m.witness;
    } catch (const Error& ex) {
      e.status = Status::error;
      e.message = ex.what();
    }
    e.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    out.add(std::move(e));
  };
  Sampler sampler(seed);

  if (c.kind == "in-Dk") {
    single([&] { return check_D_k(evaluate(c.args[0]), k); });
  } else if (c.kind == "in-DNk") {
    single([&] { return check_DN_k(points(c.args)); });
  } else if (c.kind == "i-tuple") {
    single([&] { return check_A_k(points(c.args), k); });
  } else if (c.kind == "nilsquare") {
    single([&] { return check_nilsquare(points(c.args)); });
  } else if (c.kind == "i-morphism") {
    single([&] {
      const MapRef& f = maps_.at(c.target);
      std::vector<Rational> base = c.base ? constant(*c.base) : std::vector<Rational>(input_dim(f), Rational(0));
      GenericTuple g = generic_Ak_tuple(input_dim(f), k, static_cast<std::size_t>(c.tuple.value_or(2)), base);
      std::vector<PointVec> image;
      for (const auto& p : g.points) image.push_back(eval_map(f, p));
      return check_A_k(image, k);
    });
  } else {
    // multi-part checks; setup faults become a single error entry
    try {
      CheckReport part;
      if (c.kind == "axioms") {
        std::vector<PointVec> pts = points(c.args);
        std::vector<AffineWeights> inner = weight_list(c.weights);
        std::optional<AffineWeights> outer;
        if (c.outer) outer.emplace(constant(*c.outer));
        if (inner.empty()) {
          for (int i = 0; i < 2; ++i) inner.push_back(sampler.weights(pts.size()));
          outer = sampler.weights(inner.size());
        }
        part = check_axioms(handle(c), pts, inner, *outer, name + "/");
      } else if (c.kind == "equiv-connection") {
        part = induced_connection_check(handle(c), constant(*c.base), name + "/");
      } else if (c.kind == "pullback-lemma") {
        const auto* iota = std::get_if<PolyMap>(&maps_.at(c.iota));
        if (!iota) throw InvalidArgument("pullback-lemma needs a polynomial iota");
        std::vector<PointVec> pts = points(c.args);
        std::vector<AffineWeights> ws = weight_list(c.weights);
        if (ws.empty())
          for (int i = 0; i < 2; ++i) ws.push_back(sampler.weights(pts.size()));
        part = check_pullback_lemma(connections_.at(c.target).field(), *iota, pts, ws, name + "/");
      } else if (c.kind == "idempotent") {
        part = check_idempotent_identities(retracts_.at(c.target), constant(*c.base), name + "/");
      }
      out.append(part);
    } catch (const Error& ex) {
      CheckEntry e;
      e.name = name;
      e.kind = c.kind;
      e.status = Status::error;
      e.message = ex.what();
      out.add(std::move(e));
    }
  }
}

CheckReport Runtime::run(std::uint64_t seed) const {
  CheckReport report;
  std::uint64_t index = 0;
  for (const auto& st : scenario_.statements)
    if (const auto* c = std::get_if<CheckDecl>(&st)) run_check(*c, seed * 1000003 + index++, report);
  return report;
}

}  // namespace infaff::dsl
