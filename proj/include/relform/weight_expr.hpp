#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "relform/graded_core.hpp"

namespace relform {

struct Estimate {
  double value = 0;
  double err = 0;
};

// Polynomial with rational coefficients in symbolic graph weights w<id>.
class WeightExpr {
 public:
  using Key = std::vector<std::uint32_t>;  // sorted symbol ids, repeated for powers

  WeightExpr() = default;
  WeightExpr(const Rational& r) { add({}, r); }
  WeightExpr(long v) : WeightExpr(Rational(v)) {}
  WeightExpr(int v) : WeightExpr(Rational(v)) {}
  static WeightExpr symbol(std::uint32_t id);

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_part() const;
  void add(const Key& k, const Rational& c);

  WeightExpr& operator+=(const WeightExpr& o);
  WeightExpr& operator-=(const WeightExpr& o);
  WeightExpr operator-() const;
  WeightExpr& operator*=(const WeightExpr& o);
  friend WeightExpr operator+(WeightExpr a, const WeightExpr& b) { return a += b; }
  friend WeightExpr operator-(WeightExpr a, const WeightExpr& b) { return a -= b; }
  friend WeightExpr operator*(const WeightExpr& a, const WeightExpr& b);
  friend WeightExpr operator*(const WeightExpr& a, const Rational& r);
  friend WeightExpr operator*(const Rational& r, const WeightExpr& a) { return a * r; }
  bool operator==(const WeightExpr&) const = default;

  // Linearised error propagation; symbols are assumed independent.
  Estimate evaluate(const std::function<Estimate(std::uint32_t)>& lookup) const;

 private:
  std::map<Key, Rational> terms_;
};

inline bool coeff_is_zero(const WeightExpr& w) { return w.is_zero(); }
std::string coeff_to_string(const WeightExpr& w);
inline bool coeff_needs_parens(const WeightExpr& w) { return w.terms().size() > 1 || !w.is_rational(); }

using WeightedPoly = Poly<WeightExpr>;

template <class R>
WeightedPoly to_weighted(const Poly<R>& p) {
  WeightedPoly r(p.context());
  for (const auto& [m, c] : p.terms()) r.add_term(m, WeightExpr(c));
  return r;
}

}  // namespace relform
