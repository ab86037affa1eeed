#include "infaff/errors.hpp"
#include "infaff/iaffine.hpp"
#include "support.hpp"

using namespace testsupport;

namespace {

PointVec pt(const ContextPtr& ctx, std::vector<WeilElement> coords) { return PointVec(ctx, std::move(coords)); }

std::vector<Rational> rats(std::vector<long> v) { return {v.begin(), v.end()}; }

ExprMap circle_map() {
  using Op = Expr::Op;
  auto x = Expr::make_variable(0);
  auto y = Expr::make_variable(1);
  auto norm = Expr::make_unary(Op::sqrt, Expr::make_binary(Op::add, Expr::make_pow(x, 2), Expr::make_pow(y, 2)));
  return ExprMap(2, {Expr::make_binary(Op::div, x, norm), Expr::make_binary(Op::div, y, norm)});
}

bool all_pass(const CheckReport& r) {
  if (auto p = r.first_problem()) {
    MESSAGE(p->name << ": " << status_name(p->status) << " " << p->message
                    << (p->witness ? " " + p->witness->location + " " + p->witness->monomial : ""));
    return false;
  }
  return true;
}

// Γ^0_{01} = Γ^0_{10} = x1, Γ^1_{11} = x0^2 - 1/2
Connection sample_connection() {
  Connection c(2);
  c.set(0, 0, 1, var(2, 1));
  c.set(1, 1, 1, var(2, 0) * var(2, 0) - Polynomial::constant(2, make_rational(1, 2)));
  return c;
}

}  // namespace

TEST_CASE("affine weights") {
  CHECK_THROWS_AS(AffineWeights(rats({1, 1})), InvalidArgument);
  CHECK_THROWS_AS(AffineWeights(std::vector<Rational>{}), InvalidArgument);
  CHECK(AffineWeights::basis(3, 1).values() == rats({0, 1, 0}));
  Sampler s(2);
  for (int i = 0; i < 20; ++i) {
    Rational sum = 0;
    auto w = s.weights(4);
    for (const auto& x : w.values()) sum += x;
    CHECK(sum == 1);
  }
}

TEST_CASE("canonical_combine") {
  auto [ctx, pts] = generic_Ak_tuple(2, 2, 3, rats({1, 2}));
  for (std::size_t k = 0; k < 3; ++k) CHECK(canonical_combine(AffineWeights::basis(3, k), pts) == pts[k]);
  std::vector<PointVec> pp{pts[1], pts[1]};
  CHECK(canonical_combine(AffineWeights({make_rational(1, 2), make_rational(1, 2)}), pp) == pts[1]);
  auto [c1, t] = generic_Ak_tuple(2, 1, 3);
  CHECK(canonical_combine(AffineWeights(rats({-1, 1, 1})), t) == t[1] + t[2] - t[0]);
  CHECK_THROWS_AS(canonical_combine(AffineWeights(rats({1})), t), DimensionMismatch);

  auto h = ActionHandle::canonical(1);
  auto [c2, t2] = generic_Ak_tuple(2, 2, 3);
  CHECK_THROWS_AS(h.combine(AffineWeights(rats({-1, 1, 1})), t2), PreconditionFailed);
}

TEST_CASE("connection_apply") {
  auto ctx = WeilContext::truncated({{"a", 2, 1}, {"b", 2, 1}});
  PointVec p = PointVec::constant(ctx, rats({1, -1}));
  PointVec q = p + pt(ctx, {gen(ctx, "a1"), gen(ctx, "a2")});
  PointVec s = p + pt(ctx, {gen(ctx, "b1"), gen(ctx, "b2")});
  CHECK(connection_apply(Connection(2).field(), p, q, s) == q + s - p);
  auto g = sample_connection().field();
  CHECK(connection_apply(g, p, q, p) == q);
  CHECK(connection_apply(g, p, p, s) == s);
  CHECK(connection_apply(g, p, q, s) == connection_apply(g, p, s, q));
  CHECK(!(connection_apply(g, p, q, s) == q + s - p));
  PointVec far = p + pt(ctx, {gen(ctx, "a1") + gen(ctx, "b1"), c(ctx, 0)});
  CHECK_THROWS_AS(connection_apply(g, p, far, s), PreconditionFailed);
}

TEST_CASE("connection_combine") {
  auto [ctx, pts] = generic_Ak_tuple(2, 2, 3, rats({0, 1}));
  Sampler s(3);
  auto w = s.weights(3);
  CHECK(connection_combine(Connection(2).field(), w, pts) == canonical_combine(w, pts));
  auto g = sample_connection().field();
  for (std::size_t k = 0; k < 3; ++k) CHECK(connection_combine(g, AffineWeights::basis(3, k), pts) == pts[k]);
  // the result stays a second-order neighbour of P_1
  CHECK(in_D_k(connection_combine(g, w, pts) - pts[0], 2));

  auto pairs = WeilContext::truncated({{"a", 2, 1}, {"b", 2, 1}});
  PointVec p = PointVec::constant(pairs, rats({2, 1}));
  PointVec q = p + pt(pairs, {gen(pairs, "a1"), gen(pairs, "a2")});
  PointVec r = p + pt(pairs, {gen(pairs, "b1"), gen(pairs, "b2")});
  std::vector<PointVec> triple{p, q, r};
  CHECK(connection_combine(g, AffineWeights(rats({-1, 1, 1})), triple) == connection_apply(g, p, q, r));
}

TEST_CASE("an asymmetric raw tensor breaks the equivalence theorem") {
  ChristoffelField raw = [](const PointVec& p) {
    ChristoffelSymbols g(p.context(), 2);
    g.set(0, 0, 1, WeilElement(p.context(), 1));
    return g;
  };
  auto pairs = WeilContext::truncated({{"a", 2, 1}, {"b", 2, 1}});
  PointVec p = PointVec::zero(pairs, 2);
  PointVec q = pt(pairs, {gen(pairs, "a1"), gen(pairs, "a2")});
  PointVec r = pt(pairs, {gen(pairs, "b1"), gen(pairs, "b2")});
  std::vector<PointVec> triple{p, q, r};
  CHECK(!raw(p).is_symmetric());
  CHECK(!(connection_combine(raw, AffineWeights(rats({-1, 1, 1})), triple) == connection_apply(raw, p, q, r)));
}

TEST_CASE("pullback_connection") {
  auto ctx = WeilContext::truncated({{"e", 2, 1}});
  PointVec p = PointVec::constant(ctx, rats({1, 3}));
  auto g = sample_connection().field();
  auto id = pullback_connection(g, PolyMap::identity(2), p);
  auto direct = g(p);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) CHECK(id.at(i, j, k) == direct.at(i, j, k));

  auto flat = Connection(2).field();
  auto lin = pullback_connection(flat, PolyMap::affine({{2, 1}, {1, 1}}, rats({4, 0})), p);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) CHECK(lin.at(i, j, k).is_zero());

  // n = 1, ι(x) = x + x², Γ = 0: Γ̃_P[u,v] = -2uv / (1 + 2P), at P = 1 + e1 with nilpotent part
  auto c1 = WeilContext::truncated({{"e", 1, 2}});
  PolyMap iota(1, {var(1, 0) + var(1, 0) * var(1, 0)});
  PointVec q = pt(c1, {c(c1, 1) + gen(c1, "e1")});
  auto tilde = pullback_connection(Connection(1).field(), iota, q);
  CHECK(tilde.at(0, 0, 0) == c(c1, -2) * invert(c(c1, 1) + 2 * q[0]));

  PolyMap singular(2, {var(2, 0) * var(2, 0), var(2, 1)});
  CHECK_THROWS_AS(pullback_connection(g, singular, PointVec::zero(ctx, 2)), NotInvertible);
}

TEST_CASE("axioms for the canonical action") {
  Sampler s(5);
  for (unsigned k = 1; k <= 3; ++k)
    for (std::size_t t = 2; t <= 4; ++t) {
      auto [ctx, pts] = generic_Ak_tuple(2, k, t, rats({1, -1}));
      std::vector<AffineWeights> inner{s.weights(t), s.weights(t), s.weights(t)};
      CHECK(all_pass(check_axioms(ActionHandle::canonical(k), pts, inner, s.weights(3))));
    }
}

TEST_CASE("axioms for connection actions") {
  Sampler s(6);
  for (int trial = 0; trial < 5; ++trial) {
    auto conn = s.connection(2, 2);
    auto [ctx, pts] = generic_Ak_tuple(2, 2, 3, rats({1, 0}));
    std::vector<AffineWeights> inner{s.weights(3), s.weights(3)};
    CHECK(all_pass(check_axioms(ActionHandle::connection(conn), pts, inner, s.weights(2))));
  }
}

TEST_CASE("a point-dependent raw injection breaks associativity") {
  auto conn = sample_connection();
  // adds Γ^0_{01} = 1 (only that slot) whenever the base point is not a rational point
  ChristoffelField broken = [conn](const PointVec& p) {
    ChristoffelSymbols g = conn.at(p);
    if (!p.is_constant()) g.set(0, 0, 1, g.at(0, 0, 1) + WeilElement(p.context(), 1));
    return g;
  };
  auto [ctx, pts] = generic_Ak_tuple(2, 2, 3);
  Sampler s(8);
  std::vector<AffineWeights> inner{AffineWeights(rats({-1, 1, 1})), AffineWeights(rats({2, -1, 0}))};
  AffineWeights outer(rats({2, -1}));
  auto good = check_axioms(ActionHandle::connection(conn), pts, inner, outer);
  CHECK(all_pass(good));
  auto bad = check_axioms(ActionHandle::christoffel_field("broken", broken), pts, inner, outer);
  REQUIRE(bad.entries().size() == 3);
  CHECK(bad.entries()[1].name == "associativity");
  CHECK(bad.entries()[1].status == Status::fail);
  REQUIRE(bad.entries()[1].witness);
  CHECK(bad.entries()[0].status == Status::pass);
  CHECK(bad.entries()[2].status == Status::pass);
}

TEST_CASE("retract actions") {
  SUBCASE("identity retraction is the canonical action") {
    RetractPair rp{std::nullopt, PolyMap::identity(2)};
    auto [ctx, pts] = generic_Ak_tuple(2, 2, 3, rats({1, 1}));
    Sampler s(4);
    auto w = s.weights(3);
    CHECK(retract_combine(rp, w, pts) == canonical_combine(w, pts));
  }
  SUBCASE("linear projector") {
    PolyMap e = PolyMap::affine({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
    RetractPair rp{std::nullopt, e};
    auto [ctx, raw] = generic_Ak_tuple(3, 2, 3, rats({1, 2, 3}));
    std::vector<PointVec> pts;
    for (const auto& p : raw) pts.push_back(eval_map(e, p));
    Sampler s(12);
    auto w = s.weights(3);
    CHECK(retract_combine(rp, w, pts) == eval_map(e, canonical_combine(w, pts)));
    std::vector<AffineWeights> inner{s.weights(3), s.weights(3), s.weights(3)};
    CHECK(all_pass(check_axioms(ActionHandle::retract(rp), pts, inner, s.weights(3))));
    CHECK_THROWS_AS(retract_combine(rp, w, raw), PreconditionFailed);
  }
  SUBCASE("circle") {
    RetractPair rp{std::nullopt, circle_map()};
    auto base = std::vector<Rational>{make_rational(3, 5), make_rational(4, 5)};
    auto [ctx, raw] = generic_Ak_tuple(2, 2, 3, base);
    std::vector<PointVec> pts;
    for (const auto& p : raw) pts.push_back(rp.idempotent(p));
    Sampler s(13);
    std::vector<AffineWeights> inner{s.weights(3), s.weights(3)};
    CHECK(all_pass(check_axioms(ActionHandle::retract(rp), pts, inner, s.weights(2))));
    CHECK(all_pass(induced_connection_check(ActionHandle::retract(rp), base)));
    CHECK(all_pass(check_idempotent_identities(rp, base)));
  }
}

TEST_CASE("induced connections") {
  auto base = rats({1, 2});
  auto canonical = induced_connection_check(ActionHandle::canonical(2), base);
  CHECK(all_pass(canonical));
  CHECK(canonical.entries().back().name == "flat");
  Sampler s(14);
  for (int trial = 0; trial < 4; ++trial) {
    auto report = induced_connection_check(ActionHandle::connection(s.connection(2, 2)), base);
    CHECK(all_pass(report));
    CHECK(report.entries().back().name == "equals-connection");
  }
}

TEST_CASE("pullback lemma") {
  Sampler s(15);
  auto g = sample_connection().field();
  auto [ctx, pts] = generic_Ak_tuple(2, 2, 3, rats({1, 1}));
  std::vector<AffineWeights> weights{s.weights(3), s.weights(3)};
  CHECK(all_pass(check_pullback_lemma(g, PolyMap::identity(2), pts, weights)));
  CHECK(all_pass(check_pullback_lemma(g, PolyMap::affine({{1, 2}, {0, 1}}, rats({1, 0})), pts, weights)));
  PolyMap quad(2, {var(2, 0) + var(2, 1) * var(2, 1), var(2, 1) - var(2, 0) * var(2, 1)});
  CHECK(all_pass(check_pullback_lemma(Connection(2).field(), quad, pts, weights)));
  CHECK(all_pass(check_pullback_lemma(g, quad, pts, weights)));

  // quad is not affine on second-order tuples; without the correction the images disagree
  AffineWeights w(rats({-1, 1, 1}));
  std::vector<PointVec> images;
  for (const auto& p : pts) images.push_back(eval_map(quad, p));
  CHECK(eval_map(quad, canonical_combine(w, pts)) != canonical_combine(w, images));
}

TEST_CASE("idempotent identities") {
  PolyMap proj = PolyMap::affine({{1, 0}, {0, 0}});
  CHECK(all_pass(check_idempotent_identities(RetractPair{std::nullopt, proj}, rats({3, 0}))));
  CHECK(all_pass(check_idempotent_identities(RetractPair{std::nullopt, PolyMap::identity(2)}, rats({3, 7}))));

  // parabola: e(x, y) = (x, x²), also as ι(t) = (t, t²) after r(x, y) = x
  PolyMap parabola(2, {var(2, 0), var(2, 0) * var(2, 0)});
  CHECK(compose(parabola, parabola) == parabola);
  CHECK(all_pass(check_idempotent_identities(RetractPair{std::nullopt, parabola}, rats({2, 4}))));
  RetractPair split{PolyMap(1, {var(1, 0), var(1, 0) * var(1, 0)}), PolyMap(2, {var(2, 0)})};
  CHECK(all_pass(check_idempotent_identities(split, rats({-1, 1}))));
  CHECK_THROWS_AS(check_idempotent_identities(split, rats({1, 2})), PreconditionFailed);

  // the parabola retract also carries a working second-order action
  auto [ctx, raw] = generic_Ak_tuple(2, 2, 4, rats({1, 1}));
  std::vector<PointVec> pts;
  for (const auto& p : raw) pts.push_back(split.idempotent(p));
  Sampler s(16);
  std::vector<AffineWeights> inner{s.weights(4), s.weights(4)};
  CHECK(all_pass(check_axioms(ActionHandle::retract(split), pts, inner, s.weights(2))));
}

TEST_CASE("report JSON layout") {
  CheckReport r;
  r.add("a", "in-Dk", Membership{});
  r.add("b", "in-Dk", Membership{false, Witness{"v[1]·v[1]", "d1^2", make_rational(-1, 2)}});
  CheckEntry e;
  e.name = "c";
  e.kind = "axioms";
  e.status = Status::error;
  e.message = "boom";
  r.add(e);
  CHECK(r.to_json(false) ==
        R"({"version":1,"checks":[{"name":"a","kind":"in-Dk","status":"pass","witness":null,"millis":0},)"
        R"({"name":"b","kind":"in-Dk","status":"fail","witness":{"location":"v[1]·v[1]","monomial":"d1^2","coefficient":"-1/2"},"millis":0},)"
        R"({"name":"c","kind":"axioms","status":"error","witness":null,"millis":0}],"summary":{"pass":1,"fail":1,"error":1}})");
}
