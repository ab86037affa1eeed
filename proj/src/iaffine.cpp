#include "infaff/iaffine.hpp"

#include <chrono>

#include "infaff/errors.hpp"

namespace infaff {

// --- weights ---------------------------------------------------------------

AffineWeights::AffineWeights(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("affine weights must not be empty");
  Rational sum = 0;
  for (const auto& v : values_) sum += v;
  if (sum != 1) throw InvalidArgument("affine weights sum to " + infaff::to_string(sum) + ", expected 1");
}

AffineWeights AffineWeights::basis(std::size_t n, std::size_t k) {
  if (k >= n) throw InvalidArgument("basis weight index out of range");
  std::vector<Rational> v(n, Rational(0));
  v[k] = 1;
  return AffineWeights(std::move(v));
}

std::string AffineWeights::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + infaff::to_string(values_[i]);
  return s + ")";
}

// --- Christoffel symbols ---------------------------------------------------

ChristoffelSymbols::ChristoffelSymbols(ContextPtr ctx, std::size_t dim)
    : ctx_(std::move(ctx)), dim_(dim), data_(dim * dim * dim, WeilElement(ctx_)) {}

const WeilElement& ChristoffelSymbols::at(std::size_t i, std::size_t j, std::size_t k) const {
  return data_.at((i * dim_ + j) * dim_ + k);
}

void ChristoffelSymbols::set(std::size_t i, std::size_t j, std::size_t k, WeilElement value) {
  if (value.context() != ctx_) throw ContextMismatch("Christoffel entry from another context");
  data_.at((i * dim_ + j) * dim_ + k) = std::move(value);
}

PointVec ChristoffelSymbols::operator()(const PointVec& u, const PointVec& v) const {
  if (u.dim() != dim_ || v.dim() != dim_) throw DimensionMismatch("Christoffel arguments have wrong dimension");
  if (u.context() != ctx_ || v.context() != ctx_) throw ContextMismatch("Christoffel arguments from another context");
  std::vector<WeilElement> out(dim_, WeilElement(ctx_));
  for (std::size_t j = 0; j < dim_; ++j) {
    if (u[j].is_zero()) continue;
    for (std::size_t k = 0; k < dim_; ++k) {
      WeilElement uv = u[j] * v[k];
      if (uv.is_zero()) continue;
      for (std::size_t i = 0; i < dim_; ++i) {
        const auto& g = at(i, j, k);
        if (!g.is_zero()) out[i] += g * uv;
      }
    }
  }
  return PointVec(ctx_, std::move(out));
}

bool ChristoffelSymbols::is_symmetric() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = j + 1; k < dim_; ++k)
        if (!(at(i, j, k) == at(i, k, j))) return false;
  return true;
}

// --- Connection ------------------------------------------------------------

Connection::Connection(std::size_t dim) : dim_(dim), gamma_(dim * dim * dim, Polynomial(dim)) {
  if (dim == 0) throw InvalidArgument("connection dimension must be positive");
}

std::size_t Connection::slot(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= dim_ || j >= dim_ || k >= dim_) throw DimensionMismatch("Christoffel index out of range");
  if (j > k) std::swap(j, k);
  return (i * dim_ + j) * dim_ + k;
}

void Connection::set(std::size_t i, std::size_t j, std::size_t k, Polynomial p) {
  if (p.nvars() != dim_) throw DimensionMismatch("Christoffel entry must be a polynomial in the base coordinates");
  gamma_[slot(i, j, k)] = std::move(p);
}

const Polynomial& Connection::get(std::size_t i, std::size_t j, std::size_t k) const {
  return gamma_[slot(i, j, k)];
}

std::map<std::array<std::size_t, 3>, Polynomial> Connection::entries() const {
  std::map<std::array<std::size_t, 3>, Polynomial> out;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = j; k < dim_; ++k)
        if (!get(i, j, k).is_zero()) out.emplace(std::array{i, j, k}, get(i, j, k));
  return out;
}

ChristoffelSymbols Connection::at(const PointVec& p) const {
  if (p.dim() != dim_) throw DimensionMismatch("base point dimension differs from connection dimension");
  ChristoffelSymbols g(p.context(), dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = j; k < dim_; ++k) {
        const auto& poly = get(i, j, k);
        if (poly.is_zero()) continue;
        WeilElement v = evaluate(poly, p);
        g.set(i, k, j, v);
        g.set(i, j, k, std::move(v));
      }
  return g;
}

ChristoffelField Connection::field() const {
  return [c = *this](const PointVec& p) { return c.at(p); };
}

// --- retracts --------------------------------------------------------------

std::size_t RetractPair::ambient_dim() const { return input_dim(retraction); }

PointVec RetractPair::idempotent(const PointVec& x) const {
  PointVec y = eval_map(retraction, x);
  return iota ? eval_map(*iota, y) : y;
}

std::optional<PolyMap> RetractPair::idempotent_poly() const {
  auto as_poly = [](const MapRef& f) -> std::optional<PolyMap> {
    if (auto p = std::get_if<PolyMap>(&f)) return *p;
    return std::get<ExprMap>(f).to_poly_map();
  };
  auto r = as_poly(retraction);
  if (!r) return std::nullopt;
  if (!iota) return r;
  auto i = as_poly(*iota);
  if (!i) return std::nullopt;
  return compose(*i, *r);
}

namespace {

Membership retract_fixed(const RetractPair& rp, std::span<const PointVec> points) {
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].dim() != rp.ambient_dim()) throw DimensionMismatch("point dimension differs from retract ambient dimension");
    PointVec e = rp.idempotent(points[j]);
    if (auto w = difference_witness(e, points[j], "e(P" + std::to_string(j + 1) + ")-P" + std::to_string(j + 1)))
      return {false, std::move(w)};
  }
  return {};
}

void require_weights(const AffineWeights& w, std::span<const PointVec> points) {
  if (w.size() != points.size())
    throw DimensionMismatch(std::to_string(w.size()) + " weights for " + std::to_string(points.size()) + " points");
}

std::string describe(const Membership& m) {
  if (!m.witness) return "";
  return ": " + m.witness->location + " -> " + to_string(m.witness->coefficient) + "·" + m.witness->monomial;
}

}  // namespace

// --- handles ---------------------------------------------------------------

ActionHandle ActionHandle::canonical(unsigned k) {
  if (k == 0) throw InvalidArgument("order k must be at least 1");
  ActionHandle h(Kind::canonical, k);
  h.label_ = "canonical";
  return h;
}

ActionHandle ActionHandle::connection(const Connection& c) {
  return christoffel_field("connection", c.field());
}

ActionHandle ActionHandle::christoffel_field(std::string label, ChristoffelField field) {
  ActionHandle h(Kind::connection, 2);
  h.label_ = std::move(label);
  h.field_ = std::move(field);
  return h;
}

ActionHandle ActionHandle::retract(RetractPair rp) {
  ActionHandle h(Kind::retract, 2);
  h.label_ = "retract";
  h.retract_ = std::move(rp);
  return h;
}

Membership ActionHandle::membership(std::span<const PointVec> points) const {
  if (kind_ == Kind::retract) {
    auto fixed = retract_fixed(*retract_, points);
    if (!fixed) return fixed;
  }
  return check_A_k(points, k_);
}

PointVec ActionHandle::combine(const AffineWeights& w, std::span<const PointVec> points) const {
  require_weights(w, points);
  auto m = membership(points);
  if (!m) throw PreconditionFailed("tuple is not admissible for the " + label_ + " action" + describe(m));
  switch (kind_) {
    case Kind::canonical: return canonical_combine(w, points);
    case Kind::connection: return connection_combine(field_, w, points);
    case Kind::retract: return retract_combine(*retract_, w, points);
  }
  throw InvalidArgument("unknown action kind");
}

// --- actions ---------------------------------------------------------------

PointVec canonical_combine(const AffineWeights& w, std::span<const PointVec> points) {
  require_weights(w, points);
  PointVec sum = PointVec::zero(points[0].context(), points[0].dim());
  for (std::size_t j = 0; j < points.size(); ++j)
    if (w[j] != 0) sum += w[j] * points[j];
  return sum;
}

PointVec connection_apply(const ChristoffelField& gamma, const PointVec& p, const PointVec& q, const PointVec& s) {
  PointVec u = q - p;
  PointVec v = s - p;
  if (auto m = check_D_k(u, 1); !m) throw PreconditionFailed("Q - P is not first-order" + describe(m));
  if (auto m = check_D_k(v, 1); !m) throw PreconditionFailed("S - P is not first-order" + describe(m));
  return q + s - p + gamma(p)(u, v);
}

PointVec connection_combine(const ChristoffelField& gamma, const AffineWeights& w, std::span<const PointVec> points) {
  require_weights(w, points);
  const PointVec& p1 = points[0];
  PointVec sum = canonical_combine(w, points);
  ChristoffelSymbols g = gamma(p1);
  PointVec corr = g.square(sum - p1);
  for (std::size_t j = 1; j < points.size(); ++j)
    if (w[j] != 0) corr -= w[j] * g.square(points[j] - p1);
  return sum + Rational(1, 2) * corr;
}

PointVec retract_combine(const RetractPair& rp, const AffineWeights& w, std::span<const PointVec> points) {
  require_weights(w, points);
  if (auto m = retract_fixed(rp, points); !m) throw PreconditionFailed("point is not on the retract" + describe(m));
  return rp.idempotent(canonical_combine(w, points));
}

namespace {

WeilMatrix jacobian_matrix(const DerivativeTensor& t) {
  WeilMatrix m;
  for (std::size_t i = 0; i < t.output_dim(); ++i) {
    std::vector<WeilElement> row;
    for (std::size_t j = 0; j < t.input_dim(); ++j) {
      std::size_t slot[1] = {j};
      row.push_back(t.at(i, slot));
    }
    m.push_back(std::move(row));
  }
  return m;
}

PointVec mat_vec(const WeilMatrix& m, const PointVec& v) {
  std::vector<WeilElement> out;
  for (const auto& row : m) {
    WeilElement s(v.context());
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * v[j];
    out.push_back(std::move(s));
  }
  return PointVec(v.context(), std::move(out));
}

PointVec column(const WeilMatrix& m, std::size_t j, const ContextPtr& ctx) {
  std::vector<WeilElement> out;
  for (const auto& row : m) out.push_back(row[j]);
  return PointVec(ctx, std::move(out));
}

PointVec unit(const ContextPtr& ctx, std::size_t n, std::size_t j) {
  PointVec e = PointVec::zero(ctx, n);
  e[j] = WeilElement(ctx, 1);
  return e;
}

}  // namespace

ChristoffelSymbols pullback_connection(const ChristoffelField& gamma, const PolyMap& iota, const PointVec& p) {
  const std::size_t n = iota.input_dim();
  if (iota.output_dim() != n) throw DimensionMismatch("pullback needs a map between spaces of equal dimension");
  const ContextPtr& ctx = p.context();
  WeilMatrix jac = jacobian_matrix(derivative_tensor(iota, p, 1));
  WeilMatrix jinv = mat_inverse(jac);
  DerivativeTensor hess = derivative_tensor(iota, p, 2);
  ChristoffelSymbols g = gamma(eval_map(iota, p));
  ChristoffelSymbols out(ctx, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      PointVec t = g(column(jac, j, ctx), column(jac, k, ctx));
      std::size_t slots[2] = {j, k};
      for (std::size_t l = 0; l < n; ++l) t[l] -= hess.at(l, slots);
      PointVec r = mat_vec(jinv, t);
      for (std::size_t i = 0; i < n; ++i) out.set(i, j, k, r[i]);
    }
  return out;
}

ChristoffelField pullback_field(ChristoffelField gamma, PolyMap iota) {
  return [gamma = std::move(gamma), iota = std::move(iota)](const PointVec& p) {
    return pullback_connection(gamma, iota, p);
  };
}

// --- checks ----------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

// Runs body() -> Membership-like result and records it as one entry; precondition
// and arithmetic faults become error entries.
template <typename Body>
void record(CheckReport& report, std::string name, std::string kind, Body&& body) {
  CheckEntry e;
  e.name = std::move(name);
  e.kind = std::move(kind);
  auto t0 = Clock::now();
  try {
    Membership m = body();
    e.status = m.holds ? Status::pass : Status::fail;
    if (!m.holds) e.witness = std::move(m.witness);
  } catch (const Error& ex) {
    e.status = Status::error;
    e.message = ex.what();
  }
  e.millis = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  report.add(std::move(e));
}

Membership equal(const PointVec& a, const PointVec& b, const std::string& label) {
  auto w = difference_witness(a, b, label);
  return {!w.has_value(), std::move(w)};
}

}  // namespace

CheckReport check_axioms(const ActionHandle& h, std::span<const PointVec> points,
                         std::span<const AffineWeights> inner, const AffineWeights& outer,
                         const std::string& prefix) {
  CheckReport report;
  const std::string kind = "axioms";
  std::vector<PointVec> combined;
  std::string inner_problem;
  try {
    if (outer.size() != inner.size())
      throw DimensionMismatch(std::to_string(outer.size()) + " outer weights for " + std::to_string(inner.size()) +
                              " inner families");
    for (const auto& w : inner) combined.push_back(h.combine(w, points));
  } catch (const Error& ex) {
    inner_problem = ex.what();
  }

  record(report, prefix + "neighbourhood", kind, [&]() -> Membership {
    if (!inner_problem.empty()) throw PreconditionFailed(inner_problem);
    std::vector<PointVec> all(points.begin(), points.end());
    all.insert(all.end(), combined.begin(), combined.end());
    return h.membership(all);
  });

  record(report, prefix + "associativity", kind, [&]() -> Membership {
    if (!inner_problem.empty()) throw PreconditionFailed(inner_problem);
    PointVec nested = h.combine(outer, combined);
    std::vector<Rational> flat(points.size(), Rational(0));
    for (std::size_t k = 0; k < inner.size(); ++k)
      for (std::size_t j = 0; j < points.size(); ++j) flat[j] += outer[k] * inner[k][j];
    PointVec flattened = h.combine(AffineWeights(std::move(flat)), points);
    return equal(nested, flattened, "nested-flat");
  });

  record(report, prefix + "projection", kind, [&]() -> Membership {
    for (std::size_t j = 0; j < points.size(); ++j) {
      PointVec r = h.combine(AffineWeights::basis(points.size(), j), points);
      if (auto m = equal(r, points[j], "e" + std::to_string(j + 1) + "-P" + std::to_string(j + 1)); !m) return m;
    }
    return {};
  });
  return report;
}

CheckReport induced_connection_check(const ActionHandle& h, std::span<const Rational> base,
                                     const std::string& prefix) {
  CheckReport report;
  const std::string kind = "equiv-connection";
  const std::size_t n = base.size();
  auto ctx = WeilContext::truncated({BlockSpec{"a", n, 1}, BlockSpec{"b", n, 1}});
  std::vector<WeilElement> qc, sc;
  for (std::size_t i = 0; i < n; ++i) {
    qc.push_back(WeilElement(ctx, base[i]) + WeilElement::generator(ctx, i));
    sc.push_back(WeilElement(ctx, base[i]) + WeilElement::generator(ctx, n + i));
  }
  PointVec p = PointVec::constant(ctx, base);
  PointVec q(ctx, std::move(qc));
  PointVec s(ctx, std::move(sc));
  std::string setup_problem;
  if (h.kind() == ActionHandle::Kind::retract) {
    const auto& rp = *h.retract_pair();
    if (!(rp.idempotent(p) == p)) setup_problem = "base point is not on the retract";
    q = rp.idempotent(q);
    s = rp.idempotent(s);
  }
  const AffineWeights w({-1, 1, 1});
  auto lambda = [&](const PointVec& a, const PointVec& b, const PointVec& c) {
    if (!setup_problem.empty()) throw PreconditionFailed(setup_problem);
    std::vector<PointVec> t{a, b, c};
    return h.combine(w, t);
  };

  record(report, prefix + "triple-in-A2", kind, [&]() -> Membership {
    if (!setup_problem.empty()) throw PreconditionFailed(setup_problem);
    std::vector<PointVec> t{p, q, s};
    if (auto m = check_A_k(t, 2); !m) return m;
    t.push_back(lambda(p, q, s));
    return check_A_k(t, 2);
  });
  record(report, prefix + "lambda(P,Q,P)=Q", kind, [&] { return equal(lambda(p, q, p), q, "lambda(P,Q,P)-Q"); });
  record(report, prefix + "lambda(P,P,S)=S", kind, [&] { return equal(lambda(p, p, s), s, "lambda(P,P,S)-S"); });
  record(report, prefix + "symmetric", kind,
         [&] { return equal(lambda(p, q, s), lambda(p, s, q), "lambda(P,Q,S)-lambda(P,S,Q)"); });
  if (h.kind() == ActionHandle::Kind::connection) {
    record(report, prefix + "equals-connection", kind,
           [&] { return equal(lambda(p, q, s), connection_apply(h.field(), p, q, s), "combine-apply"); });
  } else if (h.kind() == ActionHandle::Kind::canonical) {
    record(report, prefix + "flat", kind, [&] { return equal(lambda(p, q, s), q + s - p, "combine-(Q+S-P)"); });
  }
  return report;
}

CheckReport check_pullback_lemma(const ChristoffelField& gamma, const PolyMap& iota, std::span<const PointVec> points,
                                 std::span<const AffineWeights> weights, const std::string& prefix) {
  CheckReport report;
  ChristoffelField pulled = pullback_field(gamma, iota);
  std::vector<PointVec> images;
  for (const auto& p : points) images.push_back(eval_map(iota, p));
  for (std::size_t f = 0; f < weights.size(); ++f) {
    record(report, prefix + "w" + std::to_string(f + 1), "pullback-lemma", [&]() -> Membership {
      if (auto m = check_A_k(points, 2); !m) throw PreconditionFailed("tuple is not in A_2" + describe(m));
      PointVec lhs = eval_map(iota, connection_combine(pulled, weights[f], points));
      PointVec rhs = connection_combine(gamma, weights[f], images);
      return equal(lhs, rhs, "iota(pullback)-combine(iota)");
    });
  }
  return report;
}

CheckReport check_idempotent_identities(const RetractPair& rp, std::span<const Rational> p,
                                        const std::string& prefix) {
  CheckReport report;
  const std::string kind = "idempotent";
  const std::size_t n = rp.ambient_dim();
  if (p.size() != n) throw DimensionMismatch("base point dimension differs from retract ambient dimension");
  auto ctx = WeilContext::truncated({BlockSpec{"d", n, 2}});
  PointVec base = PointVec::constant(ctx, p);
  if (!(rp.idempotent(base) == base)) throw PreconditionFailed("e(P) != P at " + base.to_string());

  auto poly = rp.idempotent_poly();
  auto derivative = [&](unsigned order) {
    if (poly) return derivative_tensor(*poly, base, order);
    return jet_derivative_tensor([&rp](const PointVec& x) { return rp.idempotent(x); }, p, order, ctx);
  };
  const DerivativeTensor d1 = derivative(1);
  const DerivativeTensor d2 = derivative(2);
  const WeilMatrix a = jacobian_matrix(d1);

  record(report, prefix + "de^2=de", kind, [&]() -> Membership {
    for (std::size_t j = 0; j < n; ++j) {
      PointVec col = column(a, j, ctx);
      if (auto m = equal(mat_vec(a, col), col, "(de·de-de)[col " + std::to_string(j + 1) + "]"); !m) return m;
    }
    return {};
  });

  record(report, prefix + "d2e-identity", kind, [&]() -> Membership {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<PointVec> raw{unit(ctx, n, j), unit(ctx, n, k)};
        std::vector<PointVec> pushed{column(a, j, ctx), column(a, k, ctx)};
        PointVec lhs = d2.apply(pushed) + mat_vec(a, d2.apply(raw));
        std::string label = "pair(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
        if (auto m = equal(lhs, d2.apply(raw), label); !m) return m;
      }
    return {};
  });

  std::vector<WeilElement> delta;
  for (std::size_t i = 0; i < n; ++i) delta.push_back(WeilElement::generator(ctx, i));
  const PointVec moved = base + PointVec(ctx, std::move(delta));

  record(report, prefix + "de(d2e[d]^2)=0", kind, [&]() -> Membership {
    PointVec d = rp.idempotent(moved) - base;
    return equal(mat_vec(a, d2.apply_power(d)), PointVec::zero(ctx, n), "de(d2e[d]^2)");
  });

  record(report, prefix + "e(e(P+d))=e(P+d)", kind, [&]() -> Membership {
    PointVec once = rp.idempotent(moved);
    return equal(rp.idempotent(once), once, "e(e(P+d))-e(P+d)");
  });
  return report;
}

}  // namespace infaff
