#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relform {

using Rational = mpq_class;

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContextMismatch : AlgebraError {
  ContextMismatch() : AlgebraError("operands live in different contexts") {}
};
struct UnknownVariable : AlgebraError {
  explicit UnknownVariable(std::string_view name)
      : AlgebraError("unknown variable '" + std::string(name) + "'") {}
};
struct ArityMismatch : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct DegreeError : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct Variable {
  std::string name;
  int degree = 0;
  bool operator==(const Variable&) const = default;
};

class GradedContext;
using Context = std::shared_ptr<const GradedContext>;

// Ordered alphabet of graded generators. A doubled context additionally
// records its base context; base variable i is paired with variable size(base)+i.
class GradedContext {
 public:
  explicit GradedContext(std::vector<Variable> vars, Context base = nullptr);

  std::size_t size() const { return vars_.size(); }
  const Variable& var(std::size_t i) const { return vars_.at(i); }
  const std::vector<Variable>& variables() const { return vars_; }
  int degree(std::size_t i) const { return vars_[i].degree; }
  bool odd(std::size_t i) const { return odd_[i]; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;

  bool is_doubled() const { return base_ != nullptr; }
  const Context& base() const { return base_; }
  std::size_t pair_count() const { return base_ ? base_->size() : 0; }
  std::size_t conjugate(std::size_t i) const { return pair_count() + i; }

  bool same_as(const GradedContext& other) const;

 private:
  std::vector<Variable> vars_;
  std::vector<bool> odd_;
  Context base_;
};

Context make_context(std::vector<Variable> vars);
// Base variables first, then conjugates d_<name> of degree 1 - degree.
Context make_doubled(const Context& base);
bool same_context(const Context& a, const Context& b);
void require_same(const Context& a, const Context& b);

inline bool odd_degree(int d) { return (d % 2 + 2) % 2 == 1; }

struct Monomial {
  std::vector<unsigned> exp;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exp(n, 0) {}
  bool is_one() const;
  unsigned total() const;
  auto operator<=>(const Monomial&) const = default;
};

int monomial_degree(const GradedContext& ctx, const Monomial& m);
bool monomial_odd(const GradedContext& ctx, const Monomial& m);
// Product a*b brought to canonical order. Returns 0 when an odd square appears.
int monomial_mul(const GradedContext& ctx, const Monomial& a, const Monomial& b, Monomial& out);
// Integer factor (sign included) and result of a one-variable derivative.
long long monomial_left_partial(const GradedContext& ctx, const Monomial& a, std::size_t v, Monomial& out);
long long monomial_right_partial(const GradedContext& ctx, const Monomial& a, std::size_t v, Monomial& out);
// Applies the composite operator d^D = d_{v1}^{e1} ... d_{vr}^{er} (canonical order) to a.
long long apply_derivative(const GradedContext& ctx, const Monomial& d, const Monomial& a, Monomial& out);

// Coefficient ring hooks; WeightExpr provides the same set.
inline bool coeff_is_zero(const Rational& r) { return sgn(r) == 0; }
std::string coeff_to_string(const Rational& r);
inline bool coeff_needs_parens(const Rational&) { return false; }

template <class R>
class Poly {
 public:
  using Terms = std::map<Monomial, R>;

  Poly() = default;
  explicit Poly(Context ctx) : ctx_(std::move(ctx)) {}

  static Poly constant(Context ctx, const R& c) {
    Poly p(ctx);
    p.add_term(Monomial(ctx->size()), c);
    return p;
  }
  static Poly variable(Context ctx, std::size_t i) {
    Monomial m(ctx->size());
    m.exp.at(i) = 1;
    Poly p(ctx);
    p.add_term(m, R(1));
    return p;
  }
  static Poly variable(Context ctx, std::string_view name) { return variable(ctx, ctx->index(name)); }

  const Context& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const R& c) {
    if (coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, R(-c));
    return *this;
  }
  Poly operator-() const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, R(-c));
    return r;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  Poly scaled(const R& s) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_) r.add_term(m, R(c * s));
    return r;
  }

  bool operator==(const Poly& o) const {
    if (terms_.empty() && o.terms_.empty()) return true;
    return same_context(ctx_, o.ctx_) && terms_ == o.terms_;
  }

  // Degree of a homogeneous nonzero element.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      int md = monomial_degree(*ctx_, m);
      if (d && *d != md) return std::nullopt;
      d = md;
    }
    return d;
  }
  bool is_homogeneous() const { return terms_.empty() || degree().has_value(); }

  std::map<int, Poly> components() const {
    std::map<int, Poly> out;
    for (const auto& [m, c] : terms_) {
      auto [it, ins] = out.try_emplace(monomial_degree(*ctx_, m), ctx_);
      it->second.terms_.emplace(m, c);
    }
    return out;
  }

  template <class Pred>
  Poly filtered(Pred keep) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_)
      if (keep(m)) r.terms_.emplace(m, c);
    return r;
  }

 private:
  void adopt(const Poly& o) {
    if (!ctx_) {
      ctx_ = o.ctx_;
      return;
    }
    if (o.ctx_) require_same(ctx_, o.ctx_);
  }

  Context ctx_;
  Terms terms_;
};

using GradedPoly = Poly<Rational>;

template <class R>
Poly<R> poly_mul(const Poly<R>& p, const Poly<R>& q) {
  require_same(p.context(), q.context());
  Poly<R> r(p.context());
  const auto& ctx = *p.context();
  Monomial prod;
  for (const auto& [a, ca] : p.terms())
    for (const auto& [b, cb] : q.terms()) {
      int s = monomial_mul(ctx, a, b, prod);
      if (s == 0) continue;
      R c = ca * cb;
      r.add_term(prod, s > 0 ? c : R(-c));
    }
  return r;
}

template <class R>
Poly<R> operator*(const Poly<R>& p, const Poly<R>& q) {
  return poly_mul(p, q);
}

template <class R>
Poly<R> left_partial(const Poly<R>& p, std::size_t v) {
  if (v >= p.context()->size()) throw UnknownVariable("#" + std::to_string(v));
  Poly<R> r(p.context());
  Monomial out;
  for (const auto& [m, c] : p.terms()) {
    long long k = monomial_left_partial(*p.context(), m, v, out);
    if (k != 0) r.add_term(out, R(c * Rational(static_cast<long>(k))));
  }
  return r;
}

template <class R>
Poly<R> right_partial(const Poly<R>& p, std::size_t v) {
  if (v >= p.context()->size()) throw UnknownVariable("#" + std::to_string(v));
  Poly<R> r(p.context());
  Monomial out;
  for (const auto& [m, c] : p.terms()) {
    long long k = monomial_right_partial(*p.context(), m, v, out);
    if (k != 0) r.add_term(out, R(c * Rational(static_cast<long>(k))));
  }
  return r;
}

template <class R>
Poly<R> left_partial(const Poly<R>& p, std::string_view name) {
  return left_partial(p, p.context()->index(name));
}
template <class R>
Poly<R> right_partial(const Poly<R>& p, std::string_view name) {
  return right_partial(p, p.context()->index(name));
}

// Re-expresses p in a context sharing the variable names it uses.
template <class R>
Poly<R> change_context(const Poly<R>& p, const Context& target) {
  if (same_context(p.context(), target)) {
    Poly<R> r(target);
    r += p.filtered([](const Monomial&) { return true; });
    return r;
  }
  const auto& src = *p.context();
  std::vector<std::size_t> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target->find(src.var(i).name);
    map[i] = j ? *j : target->size();
  }
  Poly<R> r(target);
  Monomial acc, next;
  for (const auto& [m, c] : p.terms()) {
    acc = Monomial(target->size());
    int sign = 1;
    for (std::size_t i = 0; i < src.size() && sign != 0; ++i) {
      if (m.exp[i] == 0) continue;
      if (map[i] == target->size()) throw UnknownVariable(src.var(i).name);
      if (target->degree(map[i]) != src.degree(i)) throw ContextMismatch();
      Monomial v(target->size());
      v.exp[map[i]] = m.exp[i];
      sign *= monomial_mul(*target, acc, v, next);
      acc = next;
    }
    if (sign != 0) r.add_term(acc, sign > 0 ? c : R(-c));
  }
  return r;
}

template <class R>
std::string to_string(const Poly<R>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& ctx = *p.context();
  for (const auto& [m, c] : p.terms()) {
    std::string cs = coeff_to_string(c);
    bool neg = !coeff_needs_parens(c) && !cs.empty() && cs[0] == '-';
    if (neg) cs.erase(0, 1);
    if (coeff_needs_parens(c)) cs = "(" + cs + ")";
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    std::string mono;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (m.exp[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ctx.var(i).name;
      if (m.exp[i] > 1) mono += "^" + std::to_string(m.exp[i]);
    }
    if (mono.empty()) out += cs;
    else if (cs == "1") out += mono;
    else out += cs + "*" + mono;
  }
  return out;
}

// Koszul sign of the permutation sending slot i to slot sigma[i] (0-based).
int permutation_sign(const std::vector<int>& sigma, const std::vector<int>& degrees);
int permutation_parity_sign(const std::vector<int>& sigma);

template <class R>
struct Tensor {
  Context ctx;
  std::map<std::vector<Monomial>, R> terms;

  void add(const std::vector<Monomial>& key, const R& c) {
    if (coeff_is_zero(c)) return;
    auto [it, ins] = terms.try_emplace(key, c);
    if (!ins) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms.erase(it);
    }
  }
  bool operator==(const Tensor& o) const { return terms == o.terms; }
};

// Koszul action of sigma on a pure tensor of monomials.
std::pair<int, std::vector<Monomial>> permute_factors(const GradedContext& ctx, const std::vector<int>& sigma,
                                                      const std::vector<Monomial>& factors);

template <class R>
Tensor<R> alt_project(const Tensor<R>& t) {
  Tensor<R> out{t.ctx, {}};
  for (const auto& [key, c] : t.terms) {
    std::size_t n = key.size();
    std::vector<int> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<int>(i);
    Rational inv_fact(1);
    for (std::size_t i = 2; i <= n; ++i) inv_fact /= static_cast<long>(i);
    do {
      auto [s, moved] = permute_factors(*t.ctx, sigma, key);
      s *= permutation_parity_sign(sigma);
      R term = c * inv_fact;
      out.add(moved, s > 0 ? term : R(-term));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  return out;
}

}  // namespace relform
