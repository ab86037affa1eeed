#include "infaff/point.hpp"

#include "infaff/errors.hpp"

namespace infaff {

PointVec::PointVec(ContextPtr ctx, std::vector<WeilElement> coords)
    : ctx_(std::move(ctx)), coords_(std::move(coords)) {
  if (coords_.empty()) throw DimensionMismatch("points need at least one coordinate");
  for (const auto& c : coords_)
    if (c.context() != ctx_) throw ContextMismatch("point coordinates belong to different contexts");
}

PointVec PointVec::constant(ContextPtr ctx, std::span<const Rational> values) {
  std::vector<WeilElement> coords;
  coords.reserve(values.size());
  for (const auto& v : values) coords.emplace_back(ctx, v);
  return PointVec(std::move(ctx), std::move(coords));
}

PointVec PointVec::zero(ContextPtr ctx, std::size_t dim) {
  std::vector<WeilElement> coords(dim, WeilElement(ctx));
  return PointVec(std::move(ctx), std::move(coords));
}

bool PointVec::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

bool PointVec::is_constant() const {
  for (const auto& c : coords_)
    if (!c.is_constant()) return false;
  return true;
}

std::vector<Rational> PointVec::constant_part() const {
  std::vector<Rational> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.constant_term());
  return out;
}

void PointVec::require_compatible(const PointVec& other) const {
  if (ctx_ != other.ctx_) throw ContextMismatch("points belong to different contexts");
  if (dim() != other.dim())
    throw DimensionMismatch("dimension " + std::to_string(dim()) + " vs " + std::to_string(other.dim()));
}

PointVec PointVec::operator-() const {
  PointVec r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

PointVec& PointVec::operator+=(const PointVec& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

PointVec& PointVec::operator-=(const PointVec& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

PointVec operator*(const Rational& s, const PointVec& p) {
  PointVec r = p;
  for (auto& c : r.coords_) c = s * c;
  return r;
}

PointVec operator*(const WeilElement& s, const PointVec& p) {
  PointVec r = p;
  for (auto& c : r.coords_) c = s * c;
  return r;
}

std::string PointVec::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ", ";
    s += coords_[i].to_string();
  }
  return s + ")";
}

}  // namespace infaff
