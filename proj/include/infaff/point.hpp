#pragma once

#include <span>
#include <string>
#include <vector>

#include "infaff/weil.hpp"

namespace infaff {

/// Point or vector of R^n whose coordinates live in one Weil context.
class PointVec {
 public:
  PointVec(ContextPtr ctx, std::vector<WeilElement> coords);

  static PointVec constant(ContextPtr ctx, std::span<const Rational> values);
  static PointVec zero(ContextPtr ctx, std::size_t dim);

  const ContextPtr& context() const { return ctx_; }
  std::size_t dim() const { return coords_.size(); }
  const WeilElement& operator[](std::size_t i) const { return coords_[i]; }
  WeilElement& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<WeilElement>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_constant() const;
  std::vector<Rational> constant_part() const;

  PointVec operator-() const;
  PointVec& operator+=(const PointVec& other);
  PointVec& operator-=(const PointVec& other);
  friend PointVec operator+(PointVec a, const PointVec& b) { return a += b; }
  friend PointVec operator-(PointVec a, const PointVec& b) { return a -= b; }
  friend PointVec operator*(const Rational& s, const PointVec& p);
  friend PointVec operator*(const WeilElement& s, const PointVec& p);

  friend bool operator==(const PointVec& a, const PointVec& b) {
    return a.ctx_ == b.ctx_ && a.coords_ == b.coords_;
  }

  std::string to_string() const;

 private:
  void require_compatible(const PointVec& other) const;

  ContextPtr ctx_;
  std::vector<WeilElement> coords_;
};

}  // namespace infaff
