#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "relform/graded_core.hpp"
#include "relform/multivector.hpp"

namespace relform {

// One term c * mu o (d^{D1} x ... x d^{Dm}); derivative monomials use the
// base variables and multiply like the variables themselves.
struct OpKey {
  Monomial coeff;
  std::vector<Monomial> slots;
  auto operator<=>(const OpKey&) const = default;
};

int key_degree(const GradedContext& ctx, const OpKey& k);

using KeyTerms = std::vector<std::pair<Rational, OpKey>>;
using SlotTerms = std::vector<std::pair<Rational, std::vector<Monomial>>>;

// k-fold coproduct of the derivative monomial d (Koszul product of d_v x 1 + 1 x d_v).
SlotTerms coproduct(const GradedContext& ctx, const Monomial& d, std::size_t k);
// phi o (1^l x psi x 1^...) in normal form, without the Gerstenhaber prefactors.
KeyTerms insert_terms(const GradedContext& ctx, const OpKey& phi, const OpKey& psi, std::size_t l);
KeyTerms hochschild_terms(const GradedContext& ctx, const OpKey& phi);
std::pair<int, OpKey> cup_term(const GradedContext& ctx, const OpKey& a, const OpKey& b);
// Value of one term on monomial arguments: integer factor and monomial.
long long apply_key(const GradedContext& ctx, const OpKey& k, const std::vector<Monomial>& args, Monomial& out);

template <class R>
class MultiDiffOpT {
 public:
  using Terms = std::map<OpKey, R>;

  MultiDiffOpT() = default;
  explicit MultiDiffOpT(Context ctx) : ctx_(std::move(ctx)) {}

  // The k-fold product mu_k; mu_0 is the unit.
  static MultiDiffOpT product(Context ctx, std::size_t k) {
    MultiDiffOpT op(ctx);
    op.add_term(OpKey{Monomial(ctx->size()), std::vector<Monomial>(k, Monomial(ctx->size()))}, R(1));
    return op;
  }
  static MultiDiffOpT from_poly(const Poly<R>& p) {
    MultiDiffOpT op(p.context());
    for (const auto& [m, c] : p.terms()) op.add_term(OpKey{m, {}}, c);
    return op;
  }
  // c * mu o (d^{D1} x ... ) for a coefficient polynomial c.
  static MultiDiffOpT term(const Poly<R>& c, const std::vector<Monomial>& slots) {
    MultiDiffOpT op(c.context());
    for (const auto& [m, r] : c.terms()) op.add_term(OpKey{m, slots}, r);
    return op;
  }

  const Context& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const OpKey& k, const R& c) {
    if (coeff_is_zero(c)) return;
    auto [it, ins] = terms_.try_emplace(k, c);
    if (!ins) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }
  void add_terms(const KeyTerms& ts, const R& c) {
    for (const auto& [r, k] : ts) add_term(k, R(c * r));
  }

  MultiDiffOpT& operator+=(const MultiDiffOpT& o) {
    adopt(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  MultiDiffOpT& operator-=(const MultiDiffOpT& o) {
    adopt(o);
    for (const auto& [k, c] : o.terms_) add_term(k, R(-c));
    return *this;
  }
  MultiDiffOpT operator-() const {
    MultiDiffOpT r(ctx_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, R(-c));
    return r;
  }
  friend MultiDiffOpT operator+(MultiDiffOpT a, const MultiDiffOpT& b) { return a += b; }
  friend MultiDiffOpT operator-(MultiDiffOpT a, const MultiDiffOpT& b) { return a -= b; }
  MultiDiffOpT scaled(const R& s) const {
    MultiDiffOpT r(ctx_);
    for (const auto& [k, c] : terms_) r.add_term(k, R(c * s));
    return r;
  }
  bool operator==(const MultiDiffOpT& o) const {
    if (terms_.empty() && o.terms_.empty()) return true;
    return same_context(ctx_, o.ctx_) && terms_ == o.terms_;
  }

  std::set<std::size_t> arities() const {
    std::set<std::size_t> s;
    for (const auto& [k, c] : terms_) s.insert(k.slots.size());
    return s;
  }
  MultiDiffOpT arity_component(std::size_t m) const {
    MultiDiffOpT r(ctx_);
    for (const auto& [k, c] : terms_)
      if (k.slots.size() == m) r.terms_.emplace(k, c);
    return r;
  }
  // Components keyed by (arity, internal degree).
  std::map<std::pair<std::size_t, int>, MultiDiffOpT> components() const {
    std::map<std::pair<std::size_t, int>, MultiDiffOpT> out;
    for (const auto& [k, c] : terms_) {
      auto [it, ins] = out.try_emplace({k.slots.size(), key_degree(*ctx_, k)}, ctx_);
      it->second.terms_.emplace(k, c);
    }
    return out;
  }
  // Coefficient polynomial of the arity-0 part.
  Poly<R> as_poly() const {
    Poly<R> p(ctx_);
    for (const auto& [k, c] : terms_)
      if (k.slots.empty()) p.add_term(k.coeff, c);
    return p;
  }

 private:
  void adopt(const MultiDiffOpT& o) {
    if (!ctx_) {
      ctx_ = o.ctx_;
      return;
    }
    if (o.ctx_) require_same(ctx_, o.ctx_);
  }

  Context ctx_;
  Terms terms_;
};

using MultiDiffOp = MultiDiffOpT<Rational>;

template <class R>
Poly<R> apply_op(const MultiDiffOpT<R>& phi, const std::vector<Poly<R>>& args) {
  const Context& ctx = phi.context();
  Poly<R> out(ctx);
  if (phi.is_zero()) return out;
  for (const auto& a : args) require_same(ctx, a.context());
  std::vector<std::vector<std::pair<Monomial, R>>> lists;
  for (const auto& a : args) lists.emplace_back(a.terms().begin(), a.terms().end());
  std::vector<Monomial> pick(args.size());
  Monomial res;
  for (const auto& [k, c] : phi.terms()) {
    if (k.slots.size() != args.size())
      throw ArityMismatch("operator of arity " + std::to_string(k.slots.size()) + " applied to " +
                          std::to_string(args.size()) + " arguments");
    auto rec = [&](auto&& self, std::size_t i, const R& acc) -> void {
      if (i == args.size()) {
        long long f = apply_key(*ctx, k, pick, res);
        if (f != 0) out.add_term(res, R(acc * Rational(static_cast<long>(f))));
        return;
      }
      for (const auto& [m, r] : lists[i]) {
        pick[i] = m;
        self(self, i + 1, R(acc * r));
      }
    };
    rec(rec, 0, c);
  }
  return out;
}

template <class R>
MultiDiffOpT<R> hochschild_b(const MultiDiffOpT<R>& phi) {
  MultiDiffOpT<R> out(phi.context());
  for (const auto& [k, c] : phi.terms()) out.add_terms(hochschild_terms(*phi.context(), k), c);
  return out;
}

template <class R>
MultiDiffOpT<R> gerstenhaber_product(const MultiDiffOpT<R>& phi, const MultiDiffOpT<R>& psi) {
  require_same(phi.context(), psi.context());
  const auto& ctx = *phi.context();
  MultiDiffOpT<R> out(phi.context());
  for (const auto& [kp, cp] : phi.terms()) {
    long m1 = static_cast<long>(kp.slots.size());
    for (const auto& [kq, cq] : psi.terms()) {
      long m2 = static_cast<long>(kq.slots.size());
      long dq = key_degree(ctx, kq);
      R c = cp * cq;
      bool pre = odd_degree(static_cast<int>(((dq + m2 - 1) * (m1 - 1)) % 2));
      for (long l = 0; l < m1; ++l) {
        bool flip = pre != odd_degree(static_cast<int>((l * (m2 - 1)) % 2));
        out.add_terms(insert_terms(ctx, kp, kq, static_cast<std::size_t>(l)), flip ? R(-c) : c);
      }
    }
  }
  return out;
}

template <class R>
MultiDiffOpT<R> gerstenhaber_bracket(const MultiDiffOpT<R>& phi, const MultiDiffOpT<R>& psi) {
  require_same(phi.context(), psi.context());
  const auto& ctx = *phi.context();
  MultiDiffOpT<R> out = gerstenhaber_product(phi, psi);
  // The exchange sign depends on the homogeneous components of both operands.
  for (const auto& [dp, cp] : phi.components()) {
    long sp = static_cast<long>(dp.first) + dp.second - 1;
    for (const auto& [dq, cq] : psi.components()) {
      long sq = static_cast<long>(dq.first) + dq.second - 1;
      MultiDiffOpT<R> swapped = gerstenhaber_product(cq, cp);
      if (odd_degree(static_cast<int>((sp * sq) % 2))) out += swapped;
      else out -= swapped;
    }
  }
  (void)ctx;
  return out;
}

// (-1)^{|phi|} [mu, phi]_G, computed through the bracket.
template <class R>
MultiDiffOpT<R> hochschild_b_via_bracket(const MultiDiffOpT<R>& phi) {
  MultiDiffOpT<R> mu = MultiDiffOpT<R>::product(phi.context(), 2);
  MultiDiffOpT<R> out(phi.context());
  for (const auto& [d, comp] : phi.components()) {
    MultiDiffOpT<R> br = gerstenhaber_bracket(mu, comp);
    if (odd_degree(d.second)) out -= br;
    else out += br;
  }
  return out;
}

template <class R>
MultiDiffOpT<R> cup(const MultiDiffOpT<R>& a, const MultiDiffOpT<R>& b) {
  require_same(a.context(), b.context());
  MultiDiffOpT<R> out(a.context());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      auto [s, k] = cup_term(*a.context(), ka, kb);
      if (s == 0) continue;
      R c = ca * cb;
      out.add_term(k, s > 0 ? c : R(-c));
    }
  return out;
}

template <class R>
std::string to_string(const MultiDiffOpT<R>& op) {
  if (op.is_zero()) return "0";
  const auto& ctx = *op.context();
  std::string out;
  auto mono = [&](const Monomial& m) {
    std::string s;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      for (unsigned e = 0; e < m.exp[i]; ++e) s += (s.empty() ? "" : ",") + ctx.var(i).name;
    return s.empty() ? std::string("1") : s;
  };
  for (const auto& [k, c] : op.terms()) {
    Poly<R> coeff(op.context());
    coeff.add_term(k.coeff, c);
    std::string cs = to_string(coeff);
    if (coeff.size() == 1 && (cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos))
      cs = "(" + cs + ")";
    std::string slots;
    for (std::size_t i = 0; i < k.slots.size(); ++i) slots += (i ? "|" : "") + mono(k.slots[i]);
    if (!out.empty()) {
      if (cs[0] == '-') out += " - " + cs.substr(1);
      else out += " + " + cs;
    } else {
      out += cs;
    }
    out += " * D[" + slots + "]";
  }
  return out;
}

// Decomposition phi = hkr(gamma) + b(eta) over a truncated basis.
struct Decomposition {
  MultiVector hkr_part;
  MultiDiffOp primitive;
};
std::optional<Decomposition> truncated_decompose(const MultiDiffOp& phi, const Context& doubled,
                                                 unsigned max_poly_degree);

}  // namespace relform
