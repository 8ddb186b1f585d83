#include "relform/graded_core.hpp"

#include <algorithm>
#include <numeric>

namespace relform {

GradedContext::GradedContext(std::vector<Variable> vars, Context base) : vars_(std::move(vars)), base_(std::move(base)) {
  odd_.reserve(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name.empty()) throw AlgebraError("empty variable name");
    for (std::size_t j = 0; j < i; ++j)
      if (vars_[j].name == vars_[i].name) throw AlgebraError("duplicate variable '" + vars_[i].name + "'");
    odd_.push_back(odd_degree(vars_[i].degree));
  }
  if (base_ && 2 * base_->size() != vars_.size()) throw AlgebraError("doubled context must pair every variable");
}

std::optional<std::size_t> GradedContext::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t GradedContext::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw UnknownVariable(name);
  return *i;
}

bool GradedContext::same_as(const GradedContext& other) const {
  if (this == &other) return true;
  if (vars_ != other.vars_) return false;
  if (!base_ || !other.base_) return !base_ && !other.base_;
  return base_->same_as(*other.base_);
}

Context make_context(std::vector<Variable> vars) { return std::make_shared<const GradedContext>(std::move(vars)); }

Context make_doubled(const Context& base) {
  std::vector<Variable> vars = base->variables();
  for (const auto& v : base->variables()) vars.push_back({"d_" + v.name, 1 - v.degree});
  return std::make_shared<const GradedContext>(std::move(vars), base);
}

bool same_context(const Context& a, const Context& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

void require_same(const Context& a, const Context& b) {
  if (!same_context(a, b)) throw ContextMismatch();
}

bool Monomial::is_one() const {
  return std::all_of(exp.begin(), exp.end(), [](unsigned e) { return e == 0; });
}

unsigned Monomial::total() const { return std::accumulate(exp.begin(), exp.end(), 0u); }

int monomial_degree(const GradedContext& ctx, const Monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < m.exp.size(); ++i) d += static_cast<int>(m.exp[i]) * ctx.degree(i);
  return d;
}

bool monomial_odd(const GradedContext& ctx, const Monomial& m) {
  bool p = false;
  for (std::size_t i = 0; i < m.exp.size(); ++i)
    if (ctx.odd(i) && (m.exp[i] & 1u)) p = !p;
  return p;
}

int monomial_mul(const GradedContext& ctx, const Monomial& a, const Monomial& b, Monomial& out) {
  const std::size_t n = ctx.size();
  out.exp.resize(n);
  // Moving each odd factor of b left past the odd factors of a with larger index.
  unsigned odd_after = 0;
  bool flip = false;
  for (std::size_t i = n; i-- > 0;) {
    if (ctx.odd(i)) {
      if (a.exp[i] && b.exp[i]) return 0;
      if (b.exp[i] && (odd_after & 1u)) flip = !flip;
      if (a.exp[i]) ++odd_after;
    }
    out.exp[i] = a.exp[i] + b.exp[i];
  }
  return flip ? -1 : 1;
}

long long monomial_left_partial(const GradedContext& ctx, const Monomial& a, std::size_t v, Monomial& out) {
  if (a.exp[v] == 0) return 0;
  out = a;
  out.exp[v] -= 1;
  if (!ctx.odd(v)) return a.exp[v];
  unsigned before = 0;
  for (std::size_t i = 0; i < v; ++i)
    if (ctx.odd(i)) before += a.exp[i];
  return (before & 1u) ? -1 : 1;
}

long long monomial_right_partial(const GradedContext& ctx, const Monomial& a, std::size_t v, Monomial& out) {
  if (a.exp[v] == 0) return 0;
  out = a;
  out.exp[v] -= 1;
  if (!ctx.odd(v)) return a.exp[v];
  unsigned after = 0;
  for (std::size_t i = v + 1; i < ctx.size(); ++i)
    if (ctx.odd(i)) after += a.exp[i];
  return (after & 1u) ? -1 : 1;
}

long long apply_derivative(const GradedContext& ctx, const Monomial& d, const Monomial& a, Monomial& out) {
  out = a;
  long long k = 1;
  Monomial tmp;
  for (std::size_t i = d.exp.size(); i-- > 0;) {
    for (unsigned e = 0; e < d.exp[i]; ++e) {
      long long f = monomial_left_partial(ctx, out, i, tmp);
      if (f == 0) return 0;
      k *= f;
      out = tmp;
    }
  }
  return k;
}

std::string coeff_to_string(const Rational& r) { return r.get_str(); }

int permutation_sign(const std::vector<int>& sigma, const std::vector<int>& degrees) {
  if (sigma.size() != degrees.size()) throw ArityMismatch("permutation and degree list differ in length");
  std::vector<bool> seen(sigma.size(), false);
  for (int s : sigma) {
    if (s < 0 || static_cast<std::size_t>(s) >= sigma.size() || seen[s]) throw AlgebraError("not a permutation");
    seen[s] = true;
  }
  bool flip = false;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] > sigma[j] && odd_degree(degrees[i]) && odd_degree(degrees[j])) flip = !flip;
  return flip ? -1 : 1;
}

int permutation_parity_sign(const std::vector<int>& sigma) {
  bool flip = false;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] > sigma[j]) flip = !flip;
  return flip ? -1 : 1;
}

std::pair<int, std::vector<Monomial>> permute_factors(const GradedContext& ctx, const std::vector<int>& sigma,
                                                      const std::vector<Monomial>& factors) {
  std::vector<int> degs(factors.size());
  std::vector<Monomial> moved(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    degs[i] = monomial_degree(ctx, factors[i]);
    moved[sigma[i]] = factors[i];
  }
  return {permutation_sign(sigma, degs), std::move(moved)};
}

}  // namespace relform
