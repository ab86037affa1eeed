#include "infaff/errors.hpp"
#include "infaff/neighborhoods.hpp"
#include "support.hpp"

using namespace testsupport;

namespace {

PointVec pt(const ContextPtr& ctx, std::vector<WeilElement> coords) { return PointVec(ctx, std::move(coords)); }

// Brute force over the coordinate-product basis with dense multiplication.
bool oracle_products_vanish(const std::vector<PointVec>& slots, const ContextPtr& ctx) {
  auto blocks = blocks_of(ctx);
  const std::size_t n = slots[0].dim();
  for (const auto& idx : index_grid(n, slots.size())) {
    oracle::Dense prod{{oracle::Exps(ctx->generator_count(), 0), Rational(1)}};
    for (std::size_t r = 0; r < slots.size(); ++r) prod = oracle::multiply(prod, to_dense(slots[r][idx[r]]), blocks);
    if (!prod.empty()) return false;
  }
  return true;
}

PointVec random_vector(Sampler& s, const ContextPtr& ctx, std::size_t n) {
  std::vector<WeilElement> coords;
  for (std::size_t i = 0; i < n; ++i) {
    WeilElement x(ctx);
    for (std::size_t g = 0; g < ctx->generator_count(); ++g)
      if (s.below(3) == 0) x += s.coefficient() * WeilElement::generator(ctx, g);
    if (s.below(4) == 0) x += gen(ctx, ctx->generator_name(0)) * WeilElement::generator(ctx, s.below(ctx->generator_count()));
    coords.push_back(x);
  }
  return PointVec(ctx, std::move(coords));
}

std::vector<PointVec> reindex(const std::vector<PointVec>& pts, const std::vector<std::size_t>& h) {
  std::vector<PointVec> out;
  for (auto i : h) out.push_back(pts[i]);
  return out;
}

}  // namespace

TEST_CASE("eval_form") {
  auto ctx = WeilContext::truncated({{"a", 1, 1}, {"b", 1, 1}});
  auto det = MultilinearForm::determinant(2);
  std::vector<PointVec> basis{PointVec::constant(ctx, std::vector<Rational>{1, 0}),
                              PointVec::constant(ctx, std::vector<Rational>{0, 1})};
  CHECK(eval_form(det, basis) == c(ctx, 1));

  Sampler s(1);
  MultilinearForm phi(3, 2);
  for (const auto& idx : index_grid(2, 3)) phi.set(idx, s.coefficient());
  std::vector<PointVec> with_zero{random_vector(s, ctx, 2), PointVec::zero(ctx, 2), random_vector(s, ctx, 2)};
  CHECK(eval_form(phi, with_zero).is_zero());

  MultilinearForm sym(2, 2);
  sym.set({0, 1}, 1);
  sym.set({1, 0}, 1);
  CHECK(sym.is_symmetric());
  PointVec u = pt(ctx, {gen(ctx, "a1"), c(ctx, 0)});
  PointVec v = pt(ctx, {c(ctx, 0), gen(ctx, "b1")});
  auto ab = gen(ctx, "a1") * gen(ctx, "b1");
  std::vector<PointVec> uv{u, v};
  CHECK(eval_form(sym, uv) == ab);
  std::vector<PointVec> diag{u + v, u + v};
  CHECK(eval_form(sym, diag) == 2 * ab);
  CHECK(!ab.is_zero());

  std::vector<PointVec> short_args{u};
  CHECK_THROWS_AS(eval_form(sym, short_args), DimensionMismatch);
}

TEST_CASE("in_D_k") {
  auto c1 = WeilContext::truncated({{"eps", 2, 1}});
  PointVec v = pt(c1, {gen(c1, "eps1"), gen(c1, "eps2")});
  CHECK(in_D_k(v, 1));

  auto c2 = WeilContext::truncated({{"a", 1, 1}, {"b", 1, 1}});
  PointVec w = pt(c2, {gen(c2, "a1"), gen(c2, "b1")});
  auto m = check_D_k(w, 1);
  CHECK(!m.holds);
  REQUIRE(m.witness);
  CHECK(m.witness->monomial == "a1·b1");
  CHECK(in_D_k(w, 2));
  for (unsigned k = 1; k <= 4; ++k) CHECK(in_D_k(PointVec::zero(c2, 3), k));
  CHECK(!in_D_k(PointVec::constant(c2, std::vector<Rational>{1}), 3));
}

TEST_CASE("in_DN_k") {
  auto [ctx, v] = generic_Dk_vector(2, 1);
  std::vector<PointVec> vv{v, v};
  CHECK(in_DN_k(vv));

  auto c2 = WeilContext::truncated({{"u", 1, 1}, {"v", 1, 1}});
  std::vector<PointVec> uv{pt(c2, {gen(c2, "u1")}), pt(c2, {gen(c2, "v1")})};
  auto m = check_DN_k(uv);
  CHECK(!m.holds);
  REQUIRE(m.witness);
  CHECK(m.witness->location == "v1[1]·v2[1]");

  auto [c3, d2] = generic_Dk_vector(2, 2);
  std::vector<PointVec> with_zero{d2, PointVec::zero(c3, 2), d2};
  CHECK(in_DN_k(with_zero));
  std::vector<PointVec> bad{d2, d2};  // d2 is not first order
  CHECK_THROWS_AS(check_DN_k(bad), PreconditionFailed);
}

TEST_CASE("in_A_k") {
  for (unsigned k = 1; k <= 3; ++k) {
    auto [ctx, d] = generic_Dk_vector(2, k);
    PointVec q = PointVec::constant(ctx, std::vector<Rational>{1, -2});
    std::vector<PointVec> pair{q, q + d};
    CHECK(in_A_k(pair, k));
    if (k > 1) CHECK(!in_A_k(pair, k - 1));
  }
  auto ctx = WeilContext::truncated({{"e", 1, 1}, {"f", 1, 1}});
  std::vector<PointVec> t{PointVec::zero(ctx, 2), pt(ctx, {gen(ctx, "e1"), c(ctx, 0)}),
                          pt(ctx, {c(ctx, 0), gen(ctx, "f1")})};
  CHECK(in_A_k(t, 2));
  CHECK(!in_A_k(t, 1));
  CHECK(!in_nilsquare(t));
  std::vector<PointVec> single{t[1]};
  CHECK(in_A_k(single, 1));
  CHECK(in_A_k(std::span<const PointVec>{}, 1));
}

TEST_CASE("generic constructors") {
  {
    auto [ctx, v] = generic_Dk_vector(1, 2);
    CHECK(!(v[0] * v[0]).is_zero());
    CHECK(v[0].pow(3).is_zero());
  }
  {
    auto [ctx, v] = generic_Dk_vector(2, 1);
    CHECK((v[0] * v[1]).is_zero());
  }
  {
    auto [ctx, v] = generic_Dk_vector(2, 2);
    CHECK(!(v[0] * v[1]).is_zero());
    CHECK(in_D_k(v, 2));
    auto m = check_D_k(v, 1);
    REQUIRE(m.witness);
    CHECK(m.witness->monomial == "d1^2");
  }
  {
    std::vector<Rational> base{5};
    auto [ctx, pts] = generic_Ak_tuple(1, 1, 2, base);
    CHECK(pts[0] == PointVec::constant(ctx, base));
    CHECK((pts[1][0] - c(ctx, 5)).pow(2).is_zero());
  }
  {
    auto [ctx, pts] = generic_Ak_tuple(2, 2, 3);
    CHECK(in_A_k(pts, 2));
    for (std::size_t g = 0; g < 4; ++g)
      for (std::size_t h = 0; h < 4; ++h)
        CHECK(!(WeilElement::generator(ctx, g) * WeilElement::generator(ctx, h)).is_zero());
    PolyMap lin = PolyMap::affine({{1, 2}, {3, -1}, {0, 1}});
    std::vector<PointVec> image;
    for (const auto& p : pts) image.push_back(eval_map(lin, p));
    CHECK(in_A_k(image, 2));
  }
}

TEST_CASE("generic nil-square tuples") {
  {
    auto [ctx, pts] = generic_nilsquare_tuple(3, 2);
    auto [dctx, d] = generic_Dk_vector(3, 1);
    CHECK(in_nilsquare(pts));
    // same multiplication table as the generic first-order vector
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        CHECK((pts[1][a] * pts[1][b]).is_zero() == (d[a] * d[b]).is_zero());
  }
  {
    auto [ctx, pts] = generic_nilsquare_tuple(2, 3);
    auto lhs = gen(ctx, "u2_1") * gen(ctx, "u3_2");
    auto rhs = -(gen(ctx, "u2_2") * gen(ctx, "u3_1"));
    CHECK(lhs == rhs);
    CHECK(!lhs.is_zero());
    CHECK(in_nilsquare(pts));
  }
  for (std::size_t m = 2; m <= 4; ++m) {
    auto [ctx, pts] = generic_nilsquare_tuple(2, m);
    CHECK(in_A_k(pts, static_cast<unsigned>(m - 1)));
  }
}

TEST_CASE("nil-square strictness in the generic model") {
  for (std::size_t m = 2; m <= 3; ++m) {
    auto [ctx, pts] = generic_nilsquare_tuple(m, m + 1);
    auto verdict = check_A_k(pts, static_cast<unsigned>(m - 1));
    CHECK(!verdict.holds);
    std::vector<PointVec> diffs;
    for (std::size_t j = 1; j <= m; ++j) diffs.push_back(pts[j] - pts[0]);
    auto det = eval_form(MultilinearForm::determinant(m), diffs);
    WeilElement top(ctx, 1);
    for (std::size_t j = 0; j < m; ++j) top = top * diffs[j][j];
    CHECK(!top.is_zero());
    CHECK(det == factorial(static_cast<unsigned>(m)) * top);
  }
}

TEST_CASE("symmetric-only model") {
  // k = 1: symmetric and full relations agree on pairs
  for (std::size_t n = 1; n <= 3; ++n) {
    auto [sctx, spts] = generic_symmetric_Ak_tuple(n, 1, 2);
    auto [fctx, fpts] = generic_Ak_tuple(n, 1, 2);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        CHECK((spts[1][a] * spts[1][b]).is_zero());
        CHECK((fpts[1][a] * fpts[1][b]).is_zero());
      }
  }
  // k = 2, n = 2, m = 3: some non-symmetric cubic survives only in the symmetric model
  auto [sctx, spts] = generic_symmetric_Ak_tuple(2, 2, 3);
  auto [fctx, fpts] = generic_Ak_tuple(2, 2, 3);
  CHECK(check_A_k_symmetric(spts, 2).holds);
  CHECK(!check_A_k(spts, 2).holds);
  CHECK(check_A_k(fpts, 2).holds);
  std::size_t survivors = 0;
  for (const auto& mono : monomials_of_degree(4, 3)) {
    if (!WeilElement::from_terms(sctx, {{mono, 1}}).is_zero()) ++survivors;
    CHECK(WeilElement::from_terms(fctx, {{mono, 1}}).is_zero());
  }
  CHECK(survivors > 0);

  // base offset leaves every answer unchanged
  std::vector<Rational> base{make_rational(1, 3), -2};
  auto [bctx, bpts] = generic_symmetric_Ak_tuple(2, 2, 3, base);
  CHECK(check_A_k_symmetric(bpts, 2).holds == check_A_k_symmetric(spts, 2).holds);
  CHECK(check_A_k(bpts, 2).holds == check_A_k(spts, 2).holds);
  CHECK(check_A_k(bpts, 3).holds == check_A_k(spts, 3).holds);
}

TEST_CASE("symmetric model quotient dimensions against the oracle") {
  auto [ctx, pts] = generic_symmetric_Ak_tuple(2, 2, 3);
  oracle::QuotientOracle q{4, {}};
  for (const auto& r : ctx->relations()) q.relations.push_back(to_dense(r));
  for (int d = 3; d <= 4; ++d) {
    std::size_t survivors = 0;
    // dimension of the degree-d component = rank of the normal forms of all monomials
    std::vector<std::vector<Rational>> rows;
    auto monos = monomials_of_degree(4, static_cast<unsigned>(d));
    for (const auto& mono : monos) {
      auto x = WeilElement::from_terms(ctx, {{mono, 1}});
      std::vector<Rational> row(monos.size(), Rational(0));
      for (const auto& t : x.terms())
        row[std::find(monos.begin(), monos.end(), t.mono) - monos.begin()] = t.coef;
      rows.push_back(row);
      if (!x.is_zero()) ++survivors;
    }
    CHECK(oracle::rank(rows) == q.quotient_dim(d));
    CHECK(survivors > 0);
  }
  CHECK(q.quotient_dim(3) == 4);
  CHECK(q.quotient_dim(4) == 1);
}

TEST_CASE("reindexing closure") {
  Sampler s(31);
  auto [actx, apts] = generic_Ak_tuple(2, 2, 3);
  auto [nctx, npts] = generic_nilsquare_tuple(2, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto h = s.index_map(1 + s.below(5), 3);
    CHECK(in_A_k(reindex(apts, h), 2));
    CHECK(in_nilsquare(reindex(npts, h)));
  }
}

TEST_CASE("form-basis equivalence against dense products") {
  Sampler s(37);
  std::vector<ContextPtr> contexts{WeilContext::truncated({{"a", 2, 1}}), WeilContext::truncated({{"a", 1, 1}, {"b", 1, 1}}),
                                   WeilContext::truncated({{"a", 2, 2}}), WeilContext::truncated({{"a", 1, 2}, {"b", 1, 1}})};
  for (const auto& ctx : contexts)
    for (std::size_t n = 1; n <= 2; ++n)
      for (unsigned k = 1; k <= 2; ++k)
        for (int trial = 0; trial < 6; ++trial) {
          PointVec v = random_vector(s, ctx, n);
          std::vector<PointVec> diag(k + 1, v);
          CHECK(in_D_k(v, k) == oracle_products_vanish(diag, ctx));
          std::vector<PointVec> vs;
          for (unsigned r = 0; r <= k; ++r) vs.push_back(random_vector(s, ctx, n));
          bool members = std::all_of(vs.begin(), vs.end(), [&](const PointVec& w) { return in_D_k(w, k); });
          if (members) CHECK(in_DN_k(vs) == oracle_products_vanish(vs, ctx));
        }
}

TEST_CASE("monotonicity") {
  Sampler s(41);
  for (unsigned k = 1; k <= 3; ++k) {
    auto [ctx, pts] = generic_Ak_tuple(2, k, 3);
    CHECK(in_A_k(pts, k));
    CHECK(in_A_k(pts, k + 1));
  }
  auto ctx = WeilContext::truncated({{"a", 2, 1}, {"b", 1, 2}});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PointVec> pts{random_vector(s, ctx, 2), random_vector(s, ctx, 2), random_vector(s, ctx, 2)};
    for (unsigned k = 1; k <= 3; ++k)
      if (in_A_k(pts, k)) CHECK(in_A_k(pts, k + 1));
  }
}

TEST_CASE("nil-square antisymmetry and the symmetric-form criterion") {
  auto [ctx, pts] = generic_nilsquare_tuple(2, 3);
  PointVec u = pts[1] - pts[0];
  PointVec v = pts[2] - pts[0];
  for (const auto& idx : index_grid(2, 2)) {
    auto phi = MultilinearForm::coordinate_product(2, idx);
    std::vector<PointVec> uv{u, v}, vu{v, u};
    CHECK(eval_form(phi, uv) == -eval_form(phi, vu));
  }

  auto symmetric_forms_vanish = [](const std::vector<PointVec>& t) {
    std::vector<PointVec> diffs;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j) diffs.push_back(t[j] - t[i]);
    for (const auto& a : diffs)
      for (const auto& b : diffs)
        for (const auto& idx : index_multisets(a.dim(), 2)) {
          std::vector<PointVec> ab{a, b};
          if (!eval_form(MultilinearForm::symmetrized_product(a.dim(), idx), ab).is_zero()) return false;
        }
    return true;
  };
  auto sep = WeilContext::truncated({{"e", 1, 1}, {"f", 1, 1}});
  std::vector<std::vector<PointVec>> triples{
      pts, generic_Ak_tuple(2, 1, 3).points, generic_Ak_tuple(2, 2, 3).points,
      {PointVec::zero(sep, 2), pt(sep, {gen(sep, "e1"), c(sep, 0)}), pt(sep, {c(sep, 0), gen(sep, "f1")})}};
  for (const auto& t : triples) CHECK(in_nilsquare(t) == symmetric_forms_vanish(t));
}
