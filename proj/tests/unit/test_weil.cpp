#include <thread>

#include "infaff/errors.hpp"
#include "support.hpp"

using namespace testsupport;

TEST_CASE("truncated contexts") {
  SUBCASE("cap 1 kills squares") {
    auto ctx = WeilContext::truncated({{"eps", 1, 1}});
    auto e = gen(ctx, "eps1");
    CHECK(!e.is_zero());
    CHECK((e * e).is_zero());
  }
  SUBCASE("cap 2 block") {
    auto ctx = WeilContext::truncated({{"eps", 2, 2}});
    auto e1 = gen(ctx, "eps1");
    auto e2 = gen(ctx, "eps2");
    CHECK(!(e1 * e2).is_zero());
    CHECK((e1 * e1 * e2).is_zero());
  }
  SUBCASE("independent caps per block") {
    auto ctx = WeilContext::truncated({{"a", 1, 1}, {"b", 1, 1}});
    auto a = gen(ctx, "a1");
    auto b = gen(ctx, "b1");
    CHECK(!(a * b).is_zero());
    CHECK((a * a).is_zero());
    CHECK((b * b).is_zero());
  }
  SUBCASE("cap 0 makes generators vanish") {
    auto ctx = WeilContext::truncated({{"z", 1, 0}});
    CHECK(gen(ctx, "z1").is_zero());
  }
  CHECK_THROWS_AS(WeilContext::truncated({{"a", 1, 1}, {"a", 2, 1}}), InvalidArgument);
  CHECK_THROWS_AS(WeilContext::truncated({{"a", 0, 1}}), InvalidArgument);
  // "a" + "11" and "a1" + "1" would collide
  CHECK_THROWS_AS(WeilContext::truncated({{"a", 11, 1}, {"a1", 1, 1}}), InvalidArgument);
}

TEST_CASE("quotient contexts") {
  SUBCASE("symmetrized relation forces uv = 0") {
    const std::size_t n = 2;
    auto ctx = WeilContext::quotient({"u", "v"},
                                     {var(n, 0) * var(n, 0), var(n, 1) * var(n, 1),
                                      var(n, 0) * var(n, 1) + var(n, 1) * var(n, 0)},
                                     3);
    CHECK((gen(ctx, "u") * gen(ctx, "v")).is_zero());
    CHECK(!gen(ctx, "u").is_zero());
  }
  SUBCASE("antisymmetric pair u1 v2 = -u2 v1") {
    const std::size_t n = 4;  // u1 u2 v1 v2
    std::vector<Polynomial> rel;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) {
        rel.push_back(var(n, i) * var(n, j));
        rel.push_back(var(n, 2 + i) * var(n, 2 + j));
      }
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) rel.push_back(var(n, i) * var(n, 2 + j) + var(n, j) * var(n, 2 + i));
    auto ctx = WeilContext::quotient({"u1", "u2", "v1", "v2"}, rel, 4);
    auto lhs = gen(ctx, "u1") * gen(ctx, "v2");
    auto rhs = -(gen(ctx, "u2") * gen(ctx, "v1"));
    CHECK(lhs == rhs);
    CHECK(!lhs.is_zero());

    oracle::QuotientOracle q{4, {}};
    for (const auto& r : rel) q.relations.push_back(to_dense(r));
    CHECK(q.quotient_dim(2) == 1);
    CHECK(!q.in_span(to_dense(var(n, 0) * var(n, 3)), 2));
    CHECK(q.in_span(to_dense(var(n, 0) * var(n, 3) + var(n, 1) * var(n, 2)), 2));
  }
  SUBCASE("no relations is plain truncation") {
    auto ctx = WeilContext::quotient({"x"}, {}, 2);
    auto x = gen(ctx, "x");
    CHECK(!(x * x).is_zero());
    CHECK((x * x * x).is_zero());
  }
  CHECK_THROWS_AS(WeilContext::quotient({"x", "y"}, {var(2, 0) * var(2, 0) + var(2, 1)}, 3), InvalidArgument);
  CHECK_THROWS_AS(WeilContext::quotient({"x"}, {var(1, 0).pow(3)}, 2), InvalidArgument);
  CHECK_THROWS_AS(WeilContext::quotient({"x", "x"}, {}, 2), InvalidArgument);
}

TEST_CASE("ring operations") {
  auto c1 = WeilContext::truncated({{"eps", 1, 1}});
  auto e = gen(c1, "eps1");
  CHECK((c(c1, 1) + e) * (c(c1, 1) - e) == c(c1, 1));

  auto c2 = WeilContext::truncated({{"eps", 2, 2}});
  CHECK(gen(c2, "eps1") * gen(c2, "eps2") == WeilElement::from_terms(c2, {{Monomial({1, 1}), 1}}));

  auto c3 = WeilContext::truncated({{"eps", 1, 2}});
  auto x = c(c3, 1) + gen(c3, "eps1");
  auto cube = x.pow(3);
  CHECK(cube == c(c3, 1) + 3 * gen(c3, "eps1") + 3 * gen(c3, "eps1").pow(2));
  auto blocks = blocks_of(c3);
  CHECK(to_dense(cube) == oracle::power(to_dense(x), 3, blocks, 1));
  CHECK(x.pow(0) == c(c3, 1));

  auto other = WeilContext::truncated({{"eps", 1, 2}});
  CHECK_THROWS_AS(x + c(other, 1), ContextMismatch);
  CHECK_THROWS_AS(x * c(other, 1), ContextMismatch);
}

TEST_CASE("to_string") {
  auto ctx = WeilContext::truncated({{"eps", 2, 1}});
  auto x = c(ctx, 1) + 2 * gen(ctx, "eps1") - make_rational(1, 2) * gen(ctx, "eps2");
  CHECK(x.to_string() == "1 + 2·eps1 - 1/2·eps2");
  CHECK(WeilElement(ctx).to_string() == "0");
  CHECK((-gen(ctx, "eps1")).to_string() == "-eps1");
}

TEST_CASE("invert and sqrt") {
  auto c0 = WeilContext::truncated({{"eps", 1, 1}});
  CHECK(invert(c(c0, 2)) == c(c0, 1, 2));
  CHECK(invert(c(c0, 1) + gen(c0, "eps1")) == c(c0, 1) - gen(c0, "eps1"));
  CHECK(sqrt(c(c0, 4)) == c(c0, 2));
  CHECK(sqrt(c(c0, 1) + gen(c0, "eps1")) == c(c0, 1) + make_rational(1, 2) * gen(c0, "eps1"));
  CHECK_THROWS_AS(invert(gen(c0, "eps1")), NotInvertible);
  CHECK_THROWS_AS(sqrt(c(c0, 2)), NotInvertible);
  CHECK_THROWS_AS(sqrt(gen(c0, "eps1")), NotInvertible);

  auto c2 = WeilContext::truncated({{"eps", 1, 2}});
  auto x = c(c2, 1) + gen(c2, "eps1");
  auto inv = invert(x);
  CHECK(inv == c(c2, 1) - gen(c2, "eps1") + gen(c2, "eps1").pow(2));
  CHECK(x * inv == c(c2, 1));
  auto root = sqrt(x);
  CHECK(root == c(c2, 1) + make_rational(1, 2) * gen(c2, "eps1") - make_rational(1, 8) * gen(c2, "eps1").pow(2));
  CHECK(root * root == x);
}

TEST_CASE("mat_inverse") {
  auto ctx = WeilContext::truncated({{"eps", 1, 1}});
  WeilMatrix m{{c(ctx, 2), c(ctx, 1)}, {c(ctx, 1), c(ctx, 1)}};
  WeilMatrix expect{{c(ctx, 1), c(ctx, -1)}, {c(ctx, -1), c(ctx, 2)}};
  CHECK(mat_inverse(m) == expect);
  CHECK(mat_mul(m, mat_inverse(m)) == mat_identity(ctx, 2));

  WeilMatrix d{{c(ctx, 1) + gen(ctx, "eps1"), c(ctx, 0)}, {c(ctx, 0), c(ctx, 1)}};
  WeilMatrix dinv{{c(ctx, 1) - gen(ctx, "eps1"), c(ctx, 0)}, {c(ctx, 0), c(ctx, 1)}};
  CHECK(mat_inverse(d) == dinv);
  CHECK(mat_inverse(mat_identity(ctx, 3)) == mat_identity(ctx, 3));

  // singular constant part, nilpotent perturbation does not help
  WeilMatrix s{{gen(ctx, "eps1"), c(ctx, 1)}, {c(ctx, 0), c(ctx, 0)}};
  CHECK_THROWS_AS(mat_inverse(s), NotInvertible);
}

TEST_CASE("ring laws and dense oracle on random elements") {
  Sampler s(7);
  auto ctx = WeilContext::truncated({{"a", 2, 2}, {"b", 2, 1}});
  auto blocks = blocks_of(ctx);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_element(s, ctx, 3);
    auto y = random_element(s, ctx, 3);
    auto z = random_element(s, ctx, 3);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x + (-x) == WeilElement(ctx));
    CHECK(x.renormalized() == x);
    CHECK(to_dense(x * y) == oracle::multiply(to_dense(x), to_dense(y), blocks));
    CHECK(to_dense(x.pow(3)) == oracle::power(to_dense(x), 3, blocks, 4));
  }
}

TEST_CASE("nilpotency: products of (sum of caps + 1) generators vanish") {
  auto ctx = WeilContext::truncated({{"a", 2, 2}, {"b", 1, 1}});
  Sampler s(3);
  for (int trial = 0; trial < 30; ++trial) {
    WeilElement p(ctx, 1);
    for (int i = 0; i < 4; ++i) p = p * WeilElement::generator(ctx, s.below(3));
    CHECK(p.is_zero());
  }
}

TEST_CASE("invert and sqrt round trips on random elements") {
  Sampler s(11);
  auto ctx = WeilContext::truncated({{"e", 2, 3}});
  for (int trial = 0; trial < 25; ++trial) {
    auto n = random_element(s, ctx, 3);
    n = n - WeilElement(ctx, n.constant_term());
    auto x = WeilElement(ctx, s.nonzero_coefficient()) + n;
    CHECK(x * invert(x) == c(ctx, 1));
    Rational r = s.nonzero_coefficient();
    auto y = WeilElement(ctx, r * r) + n;
    auto root = sqrt(y);
    CHECK(root * root == y);
    CHECK(root.constant_term() > 0);
  }
}

TEST_CASE("quotient soundness against the dense elimination oracle") {
  Sampler s(5);
  for (int instance = 0; instance < 6; ++instance) {
    const std::size_t n = 3;
    std::vector<Polynomial> rels;
    for (int r = 0; r < 3; ++r) {
      unsigned d = 2 + static_cast<unsigned>(s.below(2));
      Polynomial p = s.polynomial(n, d, d);
      if (!p.is_zero()) rels.push_back(p);
    }
    auto ctx = WeilContext::quotient({"x", "y", "z"}, rels, 4);
    oracle::QuotientOracle q{3, {}};
    for (const auto& r : rels) {
      CHECK(WeilElement::from_terms(ctx, r.terms()).is_zero());
      q.relations.push_back(to_dense(r));
    }
    for (unsigned d = 0; d <= 4; ++d) {
      for (const auto& m : monomials_of_degree(n, d)) {
        bool zero = WeilElement::from_terms(ctx, {{m, 1}}).is_zero();
        CHECK(zero == q.in_span({{oracle::Exps(m.exponents().begin(), m.exponents().end()), Rational(1)}},
                                static_cast<int>(d)));
      }
      for (int trial = 0; trial < 5; ++trial) {
        Polynomial p = s.polynomial(n, d, d);
        auto x = WeilElement::from_terms(ctx, p.terms());
        CHECK(x.is_zero() == (p.is_zero() || q.in_span(to_dense(p), static_cast<int>(d))));
        CHECK(x.renormalized() == x);
        // normal forms agree exactly when the difference lies in the relation span
        Polynomial p2 = s.polynomial(n, d, d);
        auto y = WeilElement::from_terms(ctx, p2.terms());
        CHECK((x == y) == q.in_span(to_dense(p - p2), static_cast<int>(d)));
      }
    }
  }
}

TEST_CASE("quotient ring laws") {
  auto ctx = WeilContext::quotient({"x", "y"}, {var(2, 0) * var(2, 1) - var(2, 1) * var(2, 1)}, 4);
  Sampler s(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_element(s, ctx, 2);
    auto y = random_element(s, ctx, 2);
    auto z = random_element(s, ctx, 2);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
  }
}

TEST_CASE("concurrent first access builds identical bases") {
  auto make = [] {
    const std::size_t n = 4;
    std::vector<Polynomial> rel;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) rel.push_back(var(n, i) * var(n, j) + var(n, (i + 1) % n) * var(n, j));
    return WeilContext::quotient({"a", "b", "c", "d"}, rel, 4);
  };
  auto shared = make();
  auto fresh = make();
  Sampler s(21);
  std::vector<Polynomial> inputs;
  for (int i = 0; i < 16; ++i) inputs.push_back(s.polynomial(4, 4));
  std::vector<WeilElement> results(inputs.size(), WeilElement(shared));
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    threads.emplace_back([&, i] { results[i] = WeilElement::from_terms(shared, inputs[i].terms()); });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    CHECK(to_dense(results[i]) == to_dense(WeilElement::from_terms(fresh, inputs[i].terms())));
}
