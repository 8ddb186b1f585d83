#include "relform/weight_expr.hpp"

#include <algorithm>
#include <cmath>

namespace relform {

WeightExpr WeightExpr::symbol(std::uint32_t id) {
  WeightExpr w;
  w.add({id}, Rational(1));
  return w;
}

bool WeightExpr::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational WeightExpr::rational_part() const {
  auto it = terms_.find(Key{});
  return it == terms_.end() ? Rational(0) : it->second;
}

void WeightExpr::add(const Key& k, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, ins] = terms_.try_emplace(k, c);
  if (!ins) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

WeightExpr& WeightExpr::operator+=(const WeightExpr& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

WeightExpr& WeightExpr::operator-=(const WeightExpr& o) {
  for (const auto& [k, c] : o.terms_) add(k, Rational(-c));
  return *this;
}

WeightExpr WeightExpr::operator-() const {
  WeightExpr r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, Rational(-c));
  return r;
}

WeightExpr operator*(const WeightExpr& a, const WeightExpr& b) {
  WeightExpr r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      WeightExpr::Key k;
      k.reserve(ka.size() + kb.size());
      std::merge(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(k));
      r.add(k, Rational(ca * cb));
    }
  return r;
}

WeightExpr& WeightExpr::operator*=(const WeightExpr& o) { return *this = *this * o; }

WeightExpr operator*(const WeightExpr& a, const Rational& s) {
  WeightExpr r;
  if (sgn(s) == 0) return r;
  for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, Rational(c * s));
  return r;
}

Estimate WeightExpr::evaluate(const std::function<Estimate(std::uint32_t)>& lookup) const {
  std::map<std::uint32_t, Estimate> cache;
  auto get = [&](std::uint32_t id) -> const Estimate& {
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, lookup(id)).first;
    return it->second;
  };
  double value = 0;
  std::map<std::uint32_t, double> grad;
  for (const auto& [k, c] : terms_) {
    double coef = c.get_d();
    double prod = coef;
    for (auto id : k) prod *= get(id).value;
    value += prod;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i > 0 && k[i] == k[i - 1]) continue;
      // derivative of the monomial with respect to symbol k[i]
      std::size_t mult = std::count(k.begin(), k.end(), k[i]);
      double d = coef * static_cast<double>(mult);
      bool skipped = false;
      for (auto id : k) {
        if (id == k[i] && !skipped) {
          skipped = true;
          continue;
        }
        d *= get(id).value;
      }
      grad[k[i]] += d;
    }
  }
  double var = 0;
  for (const auto& [id, g] : grad) var += std::pow(g * get(id).err, 2);
  return {value, std::sqrt(var)};
}

std::string coeff_to_string(const WeightExpr& w) {
  if (w.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : w.terms()) {
    std::string cs = c.get_str();
    bool neg = cs[0] == '-';
    if (neg) cs.erase(0, 1);
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    std::string sym;
    for (auto id : k) sym += (sym.empty() ? "" : "*") + ("w" + std::to_string(id));
    if (sym.empty()) out += cs;
    else if (cs == "1") out += sym;
    else out += cs + "*" + sym;
  }
  return out;
}

}  // namespace relform
