#include "infaff/neighborhoods.hpp"

#include <algorithm>

#include "infaff/errors.hpp"

namespace infaff {

// --- forms -----------------------------------------------------------------

MultilinearForm::MultilinearForm(std::size_t arity, std::size_t dim) : arity_(arity), dim_(dim) {
  if (arity == 0 || dim == 0) throw InvalidArgument("forms need positive arity and dimension");
}

MultilinearForm MultilinearForm::coordinate_product(std::size_t dim, Index idx) {
  MultilinearForm f(idx.size(), dim);
  f.set(idx, 1);
  return f;
}

MultilinearForm MultilinearForm::symmetrized_product(std::size_t dim, Index idx) {
  MultilinearForm f(idx.size(), dim);
  std::sort(idx.begin(), idx.end());
  do {
    f.set(idx, 1);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return f;
}

MultilinearForm MultilinearForm::determinant(std::size_t dim) {
  MultilinearForm f(dim, dim);
  Index perm(dim);
  for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j)
        if (perm[i] > perm[j]) ++inversions;
    f.set(perm, inversions % 2 ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return f;
}

void MultilinearForm::set(const Index& idx, const Rational& value) {
  if (idx.size() != arity_) throw DimensionMismatch("form index has wrong length");
  for (auto i : idx)
    if (i >= dim_) throw DimensionMismatch("form index out of range");
  if (value == 0)
    coefs_.erase(idx);
  else
    coefs_[idx] = value;
}

Rational MultilinearForm::get(const Index& idx) const {
  auto it = coefs_.find(idx);
  return it == coefs_.end() ? Rational(0) : it->second;
}

bool MultilinearForm::is_symmetric() const {
  for (const auto& [idx, c] : coefs_) {
    Index sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    do {
      if (get(sorted) != c) return false;
    } while (std::next_permutation(sorted.begin(), sorted.end()));
  }
  return true;
}

WeilElement eval_form(const MultilinearForm& phi, std::span<const PointVec> vs) {
  if (vs.size() != phi.arity())
    throw DimensionMismatch("form of arity " + std::to_string(phi.arity()) + " applied to " +
                            std::to_string(vs.size()) + " vectors");
  for (const auto& v : vs) {
    if (v.dim() != phi.dim()) throw DimensionMismatch("vector dimension differs from form dimension");
    if (v.context() != vs[0].context()) throw ContextMismatch("form arguments belong to different contexts");
  }
  const ContextPtr& ctx = vs[0].context();
  WeilElement sum(ctx);
  for (const auto& [idx, c] : phi.coefficients()) {
    WeilElement prod(ctx, c);
    for (std::size_t r = 0; r < idx.size() && !prod.is_zero(); ++r) prod = prod * vs[r][idx[r]];
    sum += prod;
  }
  return sum;
}

std::vector<MultilinearForm::Index> index_grid(std::size_t n, std::size_t r) {
  std::vector<MultilinearForm::Index> out;
  MultilinearForm::Index idx(r, 0);
  for (;;) {
    out.push_back(idx);
    std::size_t pos = r;
    while (pos > 0 && ++idx[pos - 1] == n) idx[--pos] = 0;
    if (pos == 0) return out;
  }
}

std::vector<MultilinearForm::Index> index_multisets(std::size_t n, std::size_t r) {
  std::vector<MultilinearForm::Index> out;
  for (auto& idx : index_grid(n, r))
    if (std::is_sorted(idx.begin(), idx.end())) out.push_back(std::move(idx));
  return out;
}

// --- predicates ------------------------------------------------------------

namespace {

struct Factor {
  std::string label;
  WeilElement value;
};

Witness make_witness(const std::vector<const Factor*>& chosen, const WeilElement& product) {
  std::string loc;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (i) loc += "·";
    loc += chosen[i]->label;
  }
  const Term& t = product.terms().front();
  return Witness{loc, product.context()->monomial_to_string(t.mono), t.coef};
}

// Searches products f_1⋯f_r with f_s drawn from pools[s]; when `multiset` is set
// all pools are the same and indices are non-decreasing. Zero prefixes are pruned.
class ProductSearch {
 public:
  ProductSearch(std::vector<const std::vector<Factor>*> pools, bool multiset)
      : pools_(std::move(pools)), multiset_(multiset) {}

  std::optional<Witness> run(const ContextPtr& ctx) {
    chosen_.clear();
    return descend(0, 0, WeilElement(ctx, 1));
  }

 private:
  std::optional<Witness> descend(std::size_t depth, std::size_t start, const WeilElement& prefix) {
    if (depth == pools_.size()) {
      if (prefix.is_zero()) return std::nullopt;
      return make_witness(chosen_, prefix);
    }
    const auto& pool = *pools_[depth];
    for (std::size_t i = multiset_ ? start : 0; i < pool.size(); ++i) {
      WeilElement next = prefix * pool[i].value;
      if (next.is_zero()) continue;
      chosen_.push_back(&pool[i]);
      if (auto w = descend(depth + 1, i, next)) return w;
      chosen_.pop_back();
    }
    return std::nullopt;
  }

  std::vector<const std::vector<Factor>*> pools_;
  bool multiset_;
  std::vector<const Factor*> chosen_;
};

std::vector<Factor> coordinate_factors(const PointVec& v, const std::string& name) {
  std::vector<Factor> out;
  for (std::size_t i = 0; i < v.dim(); ++i)
    if (!v[i].is_zero()) out.push_back({name + "[" + std::to_string(i + 1) + "]", v[i]});
  return out;
}

void require_same_shape(std::span<const PointVec> points) {
  for (const auto& p : points) {
    if (p.context() != points[0].context()) throw ContextMismatch("tuple points belong to different contexts");
    if (p.dim() != points[0].dim()) throw DimensionMismatch("tuple points have different dimensions");
  }
}

struct Difference {
  std::string label;
  PointVec value;
};

std::vector<Difference> differences(std::span<const PointVec> points) {
  std::vector<Difference> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      out.push_back({"(P" + std::to_string(j + 1) + "-P" + std::to_string(i + 1) + ")", points[j] - points[i]});
  return out;
}

}  // namespace

Membership check_D_k(const PointVec& v, unsigned k) {
  if (k == 0) throw InvalidArgument("order k must be at least 1");
  auto pool = coordinate_factors(v, "v");
  std::vector<const std::vector<Factor>*> pools(k + 1, &pool);
  auto w = ProductSearch(std::move(pools), true).run(v.context());
  return {!w.has_value(), std::move(w)};
}

Membership check_DN_k(std::span<const PointVec> vs) {
  if (vs.size() < 2) throw InvalidArgument("DN_k needs k+1 >= 2 vectors");
  require_same_shape(vs);
  const unsigned k = static_cast<unsigned>(vs.size() - 1);
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (!in_D_k(vs[i], k))
      throw PreconditionFailed("vector " + std::to_string(i + 1) + " is not in D_" + std::to_string(k));
  std::vector<std::vector<Factor>> storage;
  for (std::size_t i = 0; i < vs.size(); ++i) storage.push_back(coordinate_factors(vs[i], "v" + std::to_string(i + 1)));
  std::vector<const std::vector<Factor>*> pools;
  for (const auto& s : storage) pools.push_back(&s);
  auto w = ProductSearch(std::move(pools), false).run(vs[0].context());
  return {!w.has_value(), std::move(w)};
}

Membership check_A_k(std::span<const PointVec> points, unsigned k) {
  if (k == 0) throw InvalidArgument("order k must be at least 1");
  if (points.size() <= 1) return {};
  require_same_shape(points);
  std::vector<Factor> pool;
  for (const auto& d : differences(points)) {
    for (auto& f : coordinate_factors(d.value, d.label)) {
      bool duplicate = std::any_of(pool.begin(), pool.end(), [&](const Factor& g) {
        return g.value == f.value || g.value == -f.value;
      });
      if (!duplicate) pool.push_back(std::move(f));
    }
  }
  std::vector<const std::vector<Factor>*> pools(k + 1, &pool);
  auto w = ProductSearch(std::move(pools), true).run(points[0].context());
  return {!w.has_value(), std::move(w)};
}

Membership check_nilsquare(std::span<const PointVec> points) {
  if (points.size() <= 1) return {};
  require_same_shape(points);
  for (const auto& d : differences(points)) {
    auto pool = coordinate_factors(d.value, d.label);
    std::vector<const std::vector<Factor>*> pools(2, &pool);
    if (auto w = ProductSearch(std::move(pools), true).run(points[0].context())) return {false, std::move(w)};
  }
  return {};
}

Membership check_A_k_symmetric(std::span<const PointVec> points, unsigned k) {
  if (k == 0) throw InvalidArgument("order k must be at least 1");
  if (points.size() <= 1) return {};
  require_same_shape(points);
  const auto diffs = differences(points);
  const std::size_t n = points[0].dim();
  const auto forms = index_multisets(n, k + 1);
  for (const auto& pick : index_multisets(diffs.size(), k + 1)) {
    std::vector<PointVec> args;
    std::string where;
    for (auto d : pick) {
      args.push_back(diffs[d].value);
      where += (where.empty() ? "" : ",") + diffs[d].label;
    }
    for (const auto& idx : forms) {
      WeilElement value = eval_form(MultilinearForm::symmetrized_product(n, idx), args);
      if (value.is_zero()) continue;
      std::string name = "sym";
      for (auto i : idx) name += "_" + std::to_string(i + 1);
      const Term& t = value.terms().front();
      return {false, Witness{name + "(" + where + ")", value.context()->monomial_to_string(t.mono), t.coef}};
    }
  }
  return {};
}

// --- generic models --------------------------------------------------------

GenericVector generic_Dk_vector(std::size_t n, unsigned k) {
  if (n == 0 || k == 0) throw InvalidArgument("generic D_k vector needs n, k >= 1");
  auto ctx = WeilContext::truncated({BlockSpec{"d", n, k}});
  std::vector<WeilElement> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(WeilElement::generator(ctx, i));
  return {ctx, PointVec(ctx, std::move(coords))};
}

namespace {

std::vector<Rational> base_or_zero(std::span<const Rational> base, std::size_t n) {
  if (base.empty()) return std::vector<Rational>(n, Rational(0));
  if (base.size() != n) throw DimensionMismatch("base point dimension differs from n");
  return {base.begin(), base.end()};
}

std::vector<PointVec> slice_points(const ContextPtr& ctx, std::size_t n, std::size_t m,
                                   const std::vector<Rational>& base) {
  std::vector<PointVec> pts;
  pts.push_back(PointVec::constant(ctx, base));
  for (std::size_t j = 1; j < m; ++j) {
    std::vector<WeilElement> coords;
    for (std::size_t a = 0; a < n; ++a)
      coords.push_back(WeilElement(ctx, base[a]) + WeilElement::generator(ctx, (j - 1) * n + a));
    pts.emplace_back(ctx, std::move(coords));
  }
  return pts;
}

std::vector<std::string> slice_names(std::size_t n, std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 2; j <= m; ++j)
    for (std::size_t a = 1; a <= n; ++a) names.push_back("u" + std::to_string(j) + "_" + std::to_string(a));
  return names;
}

// Difference vectors P_j - P_i (i < j) of the slice model as polynomial vectors.
std::vector<std::vector<Polynomial>> slice_differences(std::size_t n, std::size_t m) {
  const std::size_t nv = n * (m - 1);
  auto slice = [&](std::size_t j) {
    std::vector<Polynomial> v;
    for (std::size_t a = 0; a < n; ++a)
      v.push_back(j == 0 ? Polynomial(nv) : Polynomial::variable(nv, (j - 1) * n + a));
    return v;
  };
  std::vector<std::vector<Polynomial>> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      auto a = slice(j);
      auto b = slice(i);
      for (std::size_t c = 0; c < n; ++c) a[c] -= b[c];
      out.push_back(std::move(a));
    }
  return out;
}

}  // namespace

GenericTuple generic_Ak_tuple(std::size_t n, unsigned k, std::size_t m, std::span<const Rational> base) {
  if (n == 0 || k == 0 || m < 2) throw InvalidArgument("generic A_k tuple needs n, k >= 1 and m >= 2");
  auto b = base_or_zero(base, n);
  auto ctx = WeilContext::truncated({BlockSpec{"u", n * (m - 1), k}});
  return {ctx, slice_points(ctx, n, m, b)};
}

GenericTuple generic_nilsquare_tuple(std::size_t n, std::size_t m) {
  if (n == 0 || m < 2) throw InvalidArgument("generic nil-square tuple needs n >= 1 and m >= 2");
  const std::size_t nv = n * (m - 1);
  std::vector<Polynomial> relations;
  auto var = [&](std::size_t j, std::size_t a) { return Polynomial::variable(nv, (j - 2) * n + a); };
  for (std::size_t j = 2; j <= m; ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) relations.push_back(var(j, a) * var(j, b));
  for (std::size_t i = 2; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) relations.push_back(var(i, a) * var(j, b) + var(j, a) * var(i, b));
  auto ctx = WeilContext::quotient(slice_names(n, m), std::move(relations),
                                   static_cast<unsigned>(std::max<std::size_t>(m, 2)));
  return {ctx, slice_points(ctx, n, m, std::vector<Rational>(n, Rational(0)))};
}

GenericTuple generic_symmetric_Ak_tuple(std::size_t n, unsigned k, std::size_t m,
                                        std::span<const Rational> base) {
  if (n == 0 || k == 0 || m < 2) throw InvalidArgument("generic A_k tuple needs n, k >= 1 and m >= 2");
  auto b = base_or_zero(base, n);
  const auto diffs = slice_differences(n, m);
  std::vector<Polynomial> relations;
  for (const auto& pick : index_multisets(diffs.size(), k + 1)) {
    for (auto idx : index_multisets(n, k + 1)) {
      Polynomial rel(n * (m - 1));
      do {
        Polynomial term = Polynomial::constant(n * (m - 1), 1);
        for (std::size_t r = 0; r <= k; ++r) term = term * diffs[pick[r]][idx[r]];
        rel += term;
      } while (std::next_permutation(idx.begin(), idx.end()));
      if (!rel.is_zero() && std::find(relations.begin(), relations.end(), rel) == relations.end())
        relations.push_back(std::move(rel));
    }
  }
  // a single slice already satisfies D_k, so degree (m-1)k bounds every nonzero monomial
  const unsigned cap = std::max<unsigned>(static_cast<unsigned>(m - 1) * k, k + 1);
  auto ctx = WeilContext::quotient(slice_names(n, m), std::move(relations), cap);
  return {ctx, slice_points(ctx, n, m, b)};
}

}  // namespace infaff
