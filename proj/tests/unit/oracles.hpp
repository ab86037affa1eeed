#pragma once

// Slow, independent reference computations used to cross-check the library.
// They share only the Rational type with the code under test.

#include <functional>
#include <map>
#include <vector>

#include "infaff/rational.hpp"

namespace oracle {

using infaff::Rational;
using Exps = std::vector<int>;
using Dense = std::map<Exps, Rational>;

// Block caps as (first generator, count, cap).
struct Block {
  int first;
  int count;
  int cap;
};

inline bool survives(const Exps& e, const std::vector<Block>& blocks) {
  for (const auto& b : blocks) {
    int s = 0;
    for (int i = b.first; i < b.first + b.count; ++i) s += e[i];
    if (s > b.cap) return false;
  }
  return true;
}

inline Dense truncate(const Dense& x, const std::vector<Block>& blocks) {
  Dense out;
  for (const auto& [e, c] : x)
    if (c != 0 && survives(e, blocks)) out[e] = c;
  return out;
}

inline Dense add(const Dense& a, const Dense& b) {
  Dense out = a;
  for (const auto& [e, c] : b) out[e] += c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

// Expand the full product first, truncate only at the end.
inline Dense multiply(const Dense& a, const Dense& b, const std::vector<Block>& blocks) {
  Dense out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return truncate(out, blocks);
}

inline Dense power(const Dense& a, int n, const std::vector<Block>& blocks, int nvars) {
  Dense r{{Exps(nvars, 0), Rational(1)}};
  for (int i = 0; i < n; ++i) r = multiply(r, a, blocks);
  return r;
}

// All exponent vectors of total degree d in n variables, any order.
inline std::vector<Exps> monomials(int n, int d) {
  std::vector<Exps> out;
  std::function<void(int, int, Exps&)> rec = [&](int var, int left, Exps& cur) {
    if (var == n - 1) {
      cur[var] = left;
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[var] = e;
      rec(var + 1, left - e, cur);
    }
  };
  Exps cur(n, 0);
  rec(0, d, cur);
  return out;
}

// Rank of a dense rational matrix by plain Gaussian elimination.
inline int rank(std::vector<std::vector<Rational>> m) {
  int r = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

// Homogeneous relations (dense) in n variables; decides membership of a
// degree-d homogeneous element in the span of {relation · monomial}.
struct QuotientOracle {
  int nvars;
  std::vector<Dense> relations;

  std::vector<std::vector<Rational>> spanning_rows(int d, const std::vector<Exps>& cols) const {
    std::map<Exps, int> col_of;
    for (std::size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = static_cast<int>(i);
    std::vector<std::vector<Rational>> rows;
    for (const auto& rel : relations) {
      int rd = 0;
      for (int e : rel.begin()->first) rd += e;
      if (rd > d) continue;
      for (const auto& m : monomials(nvars, d - rd)) {
        std::vector<Rational> row(cols.size(), Rational(0));
        for (const auto& [e, c] : rel) {
          Exps p(nvars);
          for (int i = 0; i < nvars; ++i) p[i] = e[i] + m[i];
          row[col_of.at(p)] += c;
        }
        rows.push_back(std::move(row));
      }
    }
    return rows;
  }

  bool in_span(const Dense& x, int d) const {
    auto cols = monomials(nvars, d);
    auto rows = spanning_rows(d, cols);
    int base = rank(rows);
    std::map<Exps, int> col_of;
    for (std::size_t i = 0; i < cols.size(); ++i) col_of[cols[i]] = static_cast<int>(i);
    std::vector<Rational> row(cols.size(), Rational(0));
    for (const auto& [e, c] : x) row[col_of.at(e)] += c;
    rows.push_back(std::move(row));
    return rank(rows) == base;
  }

  int quotient_dim(int d) const {
    auto cols = monomials(nvars, d);
    return static_cast<int>(cols.size()) - rank(spanning_rows(d, cols));
  }
};

}  // namespace oracle
