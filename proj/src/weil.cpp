#include "infaff/weil.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "infaff/errors.hpp"

namespace infaff {

// --- WeilContext -----------------------------------------------------------

ContextPtr WeilContext::truncated(std::vector<BlockSpec> blocks) {
  std::shared_ptr<WeilContext> ctx(new WeilContext());
  ctx->kind_ = Kind::truncated;
  std::set<std::string> block_names;
  std::set<std::string> gen_names;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (blk.name.empty()) throw InvalidArgument("block name must not be empty");
    if (!block_names.insert(blk.name).second) throw InvalidArgument("duplicate block name '" + blk.name + "'");
    if (blk.count == 0) throw InvalidArgument("block '" + blk.name + "' has zero generators");
    for (std::size_t i = 1; i <= blk.count; ++i) {
      std::string name = blk.name + std::to_string(i);
      if (!gen_names.insert(name).second) throw InvalidArgument("duplicate generator name '" + name + "'");
      ctx->names_.push_back(std::move(name));
      ctx->block_of_.push_back(b);
    }
    ctx->max_degree_ += blk.cap;
  }
  ctx->blocks_ = std::move(blocks);
  ctx->degree_cap_ = ctx->max_degree_;
  return ctx;
}

ContextPtr WeilContext::quotient(std::vector<std::string> names, std::vector<Polynomial> relations,
                                 unsigned degree_cap) {
  std::shared_ptr<WeilContext> ctx(new WeilContext());
  ctx->kind_ = Kind::quotient;
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InvalidArgument("generator name must not be empty");
    if (!seen.insert(n).second) throw InvalidArgument("duplicate generator name '" + n + "'");
  }
  for (const auto& r : relations) {
    if (r.nvars() != names.size()) throw DimensionMismatch("relation variable count differs from generator count");
    if (r.is_zero()) continue;
    if (!r.is_homogeneous()) throw InvalidArgument("relation is not homogeneous");
    if (r.total_degree() == 0) throw InvalidArgument("constant relation would collapse the algebra");
    if (static_cast<unsigned>(r.total_degree()) > degree_cap)
      throw InvalidArgument("degree cap " + std::to_string(degree_cap) + " is below relation degree " +
                            std::to_string(r.total_degree()));
  }
  std::erase_if(relations, [](const Polynomial& p) { return p.is_zero(); });
  ctx->names_ = std::move(names);
  ctx->relations_ = std::move(relations);
  ctx->degree_cap_ = degree_cap;
  ctx->max_degree_ = degree_cap;
  return ctx;
}

std::optional<std::size_t> WeilContext::generator_index(std::string_view base,
                                                        std::size_t one_based_index) const {
  std::string wanted = std::string(base) + std::to_string(one_based_index);
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == wanted) return i;
  return std::nullopt;
}

bool WeilContext::monomial_fits(const Monomial& m) const {
  if (m.degree() > max_degree_) return false;
  if (kind_ == Kind::quotient) return true;
  // per-block degree
  std::size_t i = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    unsigned deg = 0;
    for (std::size_t j = 0; j < blocks_[b].count; ++j, ++i) deg += m[i];
    if (deg > blocks_[b].cap) return false;
  }
  return true;
}

std::string WeilContext::monomial_to_string(const Monomial& m) const {
  return infaff::monomial_to_string(m, names_);
}

std::vector<Term> WeilContext::normalize(Polynomial::TermMap raw) const {
  std::vector<Term> out;
  if (kind_ == Kind::truncated) {
    out.reserve(raw.size());
    for (auto& [m, c] : raw)
      if (c != 0 && monomial_fits(m)) out.push_back({m, std::move(c)});
    return out;
  }
  Polynomial::TermMap acc;
  auto accumulate = [&acc](const Monomial& m, const Rational& c) {
    auto [it, inserted] = acc.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) acc.erase(it);
    }
  };
  const DegreeBasis* basis = nullptr;
  unsigned basis_degree = 0;
  for (const auto& [m, c] : raw) {
    if (c == 0 || m.degree() > degree_cap_) continue;
    if (basis == nullptr || basis_degree != m.degree()) {
      basis = &basis_for_degree(m.degree());
      basis_degree = m.degree();
    }
    auto it = basis->reductions.find(m);
    if (it == basis->reductions.end()) {
      accumulate(m, c);
    } else {
      for (const auto& t : it->second) accumulate(t.mono, c * t.coef);
    }
  }
  out.reserve(acc.size());
  for (auto& [m, c] : acc) out.push_back({m, std::move(c)});
  return out;
}

const WeilContext::DegreeBasis& WeilContext::basis_for_degree(unsigned degree) const {
  {
    std::lock_guard lock(cache_mutex_);
    if (cache_.size() > degree && cache_[degree]) return *cache_[degree];
  }
  auto built = build_basis(degree);
  std::lock_guard lock(cache_mutex_);
  if (cache_.size() <= degree) cache_.resize(degree + 1);
  if (!cache_[degree]) cache_[degree] = std::move(built);
  return *cache_[degree];
}

std::shared_ptr<const WeilContext::DegreeBasis> WeilContext::build_basis(unsigned degree) const {
  auto basis = std::make_shared<DegreeBasis>();
  const std::size_t g = names_.size();
  const std::vector<Monomial> monos = monomials_of_degree(g, degree);
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index.emplace(monos[i], i);
  const std::size_t width = monos.size();

  // pivot column (highest nonzero) -> row scaled so the pivot entry is 1
  std::map<std::size_t, std::vector<Rational>> echelon;

  auto insert_row = [&](std::vector<Rational> row) {
    for (;;) {
      std::size_t h = width;
      for (std::size_t j = width; j-- > 0;)
        if (row[j] != 0) {
          h = j;
          break;
        }
      if (h == width) return;
      auto it = echelon.find(h);
      if (it == echelon.end()) {
        Rational inv = 1 / row[h];
        for (auto& x : row) x *= inv;
        echelon.emplace(h, std::move(row));
        return;
      }
      Rational f = row[h];
      const auto& piv = it->second;
      for (std::size_t j = 0; j <= h; ++j)
        if (piv[j] != 0) row[j] -= f * piv[j];
    }
  };

  for (const auto& rel : relations_) {
    unsigned e = static_cast<unsigned>(rel.total_degree());
    if (e > degree) continue;
    for (const auto& shift : monomials_of_degree(g, degree - e)) {
      if (echelon.size() == width) break;
      std::vector<Rational> row(width);
      for (const auto& [m, c] : rel.terms()) row[index.at(m * shift)] += c;
      insert_row(std::move(row));
    }
  }

  // back-substitute so every pivot column is zero outside its own row
  for (auto it = echelon.begin(); it != echelon.end(); ++it) {
    auto& row = it->second;
    for (auto lower = echelon.begin(); lower != it; ++lower) {
      Rational f = row[lower->first];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= lower->first; ++j)
        if (lower->second[j] != 0) row[j] -= f * lower->second[j];
    }
  }

  for (const auto& [pivot, row] : echelon) {
    std::vector<Term> replacement;
    for (std::size_t j = 0; j < pivot; ++j)
      if (row[j] != 0) replacement.push_back({monos[j], -row[j]});
    basis->reductions.emplace(monos[pivot], std::move(replacement));
  }
  return basis;
}

// --- WeilElement -----------------------------------------------------------

WeilElement::WeilElement(ContextPtr ctx, const Rational& constant) : ctx_(std::move(ctx)) {
  if (constant != 0) terms_.push_back({Monomial(ctx_->generator_count()), constant});
}

WeilElement WeilElement::generator(ContextPtr ctx, std::size_t index) {
  if (index >= ctx->generator_count()) throw InvalidArgument("generator index out of range");
  Polynomial::TermMap raw;
  raw.emplace(Monomial::variable(ctx->generator_count(), index), 1);
  return from_terms(std::move(ctx), std::move(raw));
}

WeilElement WeilElement::from_terms(ContextPtr ctx, Polynomial::TermMap raw) {
  for (const auto& [m, c] : raw)
    if (m.size() != ctx->generator_count()) throw DimensionMismatch("monomial does not match context");
  auto terms = ctx->normalize(std::move(raw));
  return WeilElement(std::move(ctx), std::move(terms));
}

Rational WeilElement::constant_term() const {
  if (!terms_.empty() && terms_.front().mono.degree() == 0) return terms_.front().coef;
  return 0;
}

bool WeilElement::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().mono.degree() == 0);
}

unsigned WeilElement::order() const {
  return terms_.empty() ? ctx_->max_degree() + 1 : terms_.front().mono.degree();
}

Rational WeilElement::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.mono < key; });
  return (it != terms_.end() && it->mono == m) ? it->coef : Rational(0);
}

WeilElement WeilElement::renormalized() const {
  Polynomial::TermMap raw;
  for (const auto& t : terms_) raw.emplace(t.mono, t.coef);
  return from_terms(ctx_, std::move(raw));
}

void WeilElement::require_same_context(const WeilElement& other) const {
  if (ctx_ != other.ctx_) throw ContextMismatch("operands belong to different Weil contexts");
}

WeilElement WeilElement::operator-() const {
  WeilElement r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

namespace {

// Merge two sorted term lists; normal forms are closed under linear combination
// because each degree is reduced against a fixed basis.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      out.push_back({b[j].mono, sign > 0 ? b[j].coef : Rational(-b[j].coef)});
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(a[i].coef + b[j].coef) : Rational(a[i].coef - b[j].coef);
      if (c != 0) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

WeilElement& WeilElement::operator+=(const WeilElement& other) {
  require_same_context(other);
  terms_ = merge_terms(terms_, other.terms_, +1);
  return *this;
}

WeilElement& WeilElement::operator-=(const WeilElement& other) {
  require_same_context(other);
  terms_ = merge_terms(terms_, other.terms_, -1);
  return *this;
}

WeilElement& WeilElement::operator+=(const Rational& c) { return *this += WeilElement(ctx_, c); }

WeilElement& WeilElement::operator*=(const WeilElement& other) { return *this = *this * other; }

WeilElement operator*(const WeilElement& a, const WeilElement& b) {
  a.require_same_context(b);
  const auto& ctx = a.ctx_;
  if (a.is_zero() || b.is_zero() || a.order() + b.order() > ctx->max_degree()) return WeilElement(ctx);
  if (a.is_constant()) return a.constant_term() * b;
  if (b.is_constant()) return b.constant_term() * a;
  const unsigned cap = ctx->max_degree();
  Polynomial::TermMap raw;
  for (const auto& ta : a.terms_) {
    if (ta.mono.degree() + b.order() > cap) break;
    for (const auto& tb : b.terms_) {
      if (ta.mono.degree() + tb.mono.degree() > cap) break;
      Monomial m = ta.mono * tb.mono;
      if (!ctx->monomial_fits(m)) continue;
      auto [it, inserted] = raw.try_emplace(std::move(m), ta.coef * tb.coef);
      if (!inserted) it->second += ta.coef * tb.coef;
    }
  }
  return WeilElement::from_terms(ctx, std::move(raw));
}

WeilElement operator*(const Rational& s, const WeilElement& x) {
  if (s == 0) return WeilElement(x.ctx_);
  WeilElement r = x;
  for (auto& t : r.terms_) t.coef *= s;
  return r;
}

WeilElement WeilElement::pow(unsigned e) const {
  WeilElement result(ctx_, 1);
  WeilElement base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const WeilElement& a, const WeilElement& b) {
  return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
}

std::string WeilElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational mag = abs(t.coef);
    if (first) {
      if (sgn(t.coef) < 0) s += "-";
    } else {
      s += sgn(t.coef) < 0 ? " - " : " + ";
    }
    first = false;
    if (t.mono.degree() == 0) {
      s += infaff::to_string(mag);
    } else {
      if (mag != 1) s += infaff::to_string(mag) + "·";
      s += ctx_->monomial_to_string(t.mono);
    }
  }
  return s;
}

WeilElement invert(const WeilElement& x) {
  Rational c = x.constant_term();
  if (c == 0) throw NotInvertible("element " + x.to_string() + " has zero constant term");
  Rational inv_c = 1 / c;
  // x = c(1 + t) with t nilpotent: 1/x = (1/c) * sum (-t)^i
  WeilElement t = inv_c * (x - WeilElement(x.context(), c));
  WeilElement neg_t = -t;
  WeilElement sum(x.context(), 1);
  WeilElement power(x.context(), 1);
  for (unsigned i = 1; i <= x.context()->max_degree(); ++i) {
    power = power * neg_t;
    if (power.is_zero()) break;
    sum += power;
  }
  return inv_c * sum;
}

WeilElement sqrt(const WeilElement& x) {
  Rational c = x.constant_term();
  if (sgn(c) <= 0) throw NotInvertible("square root needs a positive constant term, got " + to_string(c));
  auto root = exact_sqrt(c);
  if (!root) throw NotInvertible("constant term " + to_string(c) + " is not the square of a rational");
  WeilElement t = (1 / c) * (x - WeilElement(x.context(), c));
  // binomial series for (1 + t)^(1/2)
  WeilElement sum(x.context(), 1);
  WeilElement power(x.context(), 1);
  Rational binom = 1;
  const Rational half(1, 2);
  for (unsigned i = 1; i <= x.context()->max_degree(); ++i) {
    power = power * t;
    if (power.is_zero()) break;
    binom *= (half - (i - 1));
    binom /= i;
    sum += binom * power;
  }
  return *root * sum;
}

WeilMatrix mat_identity(const ContextPtr& ctx, std::size_t n) {
  WeilMatrix m(n, std::vector<WeilElement>(n, WeilElement(ctx)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = WeilElement(ctx, 1);
  return m;
}

WeilMatrix mat_mul(const WeilMatrix& a, const WeilMatrix& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t rows = a.size(), inner = b.size(), cols = b[0].size();
  for (const auto& row : a)
    if (row.size() != inner) throw DimensionMismatch("matrix product shape mismatch");
  WeilMatrix out(rows, std::vector<WeilElement>(cols, WeilElement(b[0][0].context())));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

WeilMatrix mat_inverse(const WeilMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  for (const auto& row : m)
    if (row.size() != n) throw DimensionMismatch("matrix inverse needs a square matrix");
  const ContextPtr& ctx = m[0][0].context();
  WeilMatrix a = m;
  WeilMatrix inv = mat_identity(ctx, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (a[r][col].constant_term() != 0) {
        pivot = r;
        break;
      }
    if (pivot == n) throw NotInvertible("constant-term matrix is singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    WeilElement p = invert(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * p;
      inv[col][j] = inv[col][j] * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      WeilElement f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace infaff
