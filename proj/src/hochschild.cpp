#include "relform/hochschild.hpp"

namespace relform {

int key_degree(const GradedContext& ctx, const OpKey& k) {
  int d = monomial_degree(ctx, k.coeff);
  for (const auto& s : k.slots) d -= monomial_degree(ctx, s);
  return d;
}

namespace {

bool mono_odd(const GradedContext& ctx, const Monomial& m) { return monomial_odd(ctx, m); }

void accumulate(std::map<std::vector<Monomial>, Rational>& acc, const std::vector<Monomial>& key, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, ins] = acc.try_emplace(key, c);
  if (!ins) {
    it->second += c;
    if (sgn(it->second) == 0) acc.erase(it);
  }
}

}  // namespace

SlotTerms coproduct(const GradedContext& ctx, const Monomial& d, std::size_t k) {
  const std::size_t n = ctx.size();
  std::map<std::vector<Monomial>, Rational> cur;
  if (k == 0) {
    if (d.is_one()) return {{Rational(1), {}}};
    return {};
  }
  cur.emplace(std::vector<Monomial>(k, Monomial(n)), Rational(1));
  Monomial prod;
  for (std::size_t v = 0; v < n; ++v) {
    for (unsigned e = 0; e < d.exp[v]; ++e) {
      Monomial dv(n);
      dv.exp[v] = 1;
      std::map<std::vector<Monomial>, Rational> next;
      for (const auto& [parts, c] : cur) {
        bool after_odd = false;
        for (std::size_t s = k; s-- > 0;) {
          int sg = monomial_mul(ctx, parts[s], dv, prod);
          if (sg != 0) {
            if (ctx.odd(v) && after_odd) sg = -sg;
            std::vector<Monomial> np = parts;
            np[s] = prod;
            accumulate(next, np, sg > 0 ? c : Rational(-c));
          }
          if (mono_odd(ctx, parts[s])) after_odd = !after_odd;
        }
      }
      cur = std::move(next);
    }
  }
  SlotTerms out;
  out.reserve(cur.size());
  for (auto& [parts, c] : cur) out.emplace_back(c, parts);
  return out;
}

KeyTerms insert_terms(const GradedContext& ctx, const OpKey& phi, const OpKey& psi, std::size_t l) {
  const std::size_t m1 = phi.slots.size();
  const std::size_t m2 = psi.slots.size();
  KeyTerms out;
  if (l >= m1) return out;
  bool psi_odd = odd_degree(key_degree(ctx, psi));
  bool sign1 = false;
  for (std::size_t k = l + 1; k < m1; ++k)
    if (psi_odd && mono_odd(ctx, phi.slots[k])) sign1 = !sign1;
  bool before_odd = false;
  for (std::size_t j = 0; j < l; ++j)
    if (mono_odd(ctx, phi.slots[j])) before_odd = !before_odd;
  bool cpsi_odd = mono_odd(ctx, psi.coeff);

  Monomial g, coeff, h;
  for (const auto& [c1, split] : coproduct(ctx, phi.slots[l], 2)) {
    const Monomial& d1 = split[0];
    const Monomial& d2 = split[1];
    long long f = apply_derivative(ctx, d1, psi.coeff, g);
    if (f == 0) continue;
    bool sign2 = mono_odd(ctx, d2) && cpsi_odd;
    bool sign4 = mono_odd(ctx, g) && before_odd;
    int sc = monomial_mul(ctx, phi.coeff, g, coeff);
    if (sc == 0) continue;
    for (const auto& [c2, parts] : coproduct(ctx, d2, m2)) {
      bool sign3 = false;
      bool e_odd = false;
      std::vector<Monomial> slots;
      slots.reserve(m1 + m2 - 1);
      for (std::size_t j = 0; j < l; ++j) slots.push_back(phi.slots[j]);
      int sh = 1;
      for (std::size_t q = 0; q < m2 && sh != 0; ++q) {
        if (e_odd && mono_odd(ctx, parts[q])) sign3 = !sign3;
        if (mono_odd(ctx, psi.slots[q])) e_odd = !e_odd;
        sh *= monomial_mul(ctx, parts[q], psi.slots[q], h);
        slots.push_back(h);
      }
      if (sh == 0) continue;
      for (std::size_t j = l + 1; j < m1; ++j) slots.push_back(phi.slots[j]);
      Rational c = c1 * c2 * Rational(static_cast<long>(f)) * sc * sh;
      if (((sign1 != sign2) != sign3) != sign4) c = -c;
      out.emplace_back(c, OpKey{coeff, std::move(slots)});
    }
  }
  return out;
}

KeyTerms hochschild_terms(const GradedContext& ctx, const OpKey& phi) {
  const std::size_t m = phi.slots.size();
  const Monomial one(ctx.size());
  KeyTerms out;
  {
    std::vector<Monomial> s{one};
    s.insert(s.end(), phi.slots.begin(), phi.slots.end());
    out.emplace_back(Rational(1), OpKey{phi.coeff, std::move(s)});
  }
  for (std::size_t j = 1; j <= m; ++j) {
    for (const auto& [c, split] : coproduct(ctx, phi.slots[j - 1], 2)) {
      std::vector<Monomial> s(phi.slots.begin(), phi.slots.begin() + (j - 1));
      s.push_back(split[0]);
      s.push_back(split[1]);
      s.insert(s.end(), phi.slots.begin() + j, phi.slots.end());
      out.emplace_back(j % 2 ? Rational(-c) : c, OpKey{phi.coeff, std::move(s)});
    }
  }
  {
    std::vector<Monomial> s = phi.slots;
    s.push_back(one);
    out.emplace_back(Rational((m + 1) % 2 ? -1 : 1), OpKey{phi.coeff, std::move(s)});
  }
  return out;
}

std::pair<int, OpKey> cup_term(const GradedContext& ctx, const OpKey& a, const OpKey& b) {
  OpKey k;
  int s = monomial_mul(ctx, a.coeff, b.coeff, k.coeff);
  if (s == 0) return {0, k};
  bool d_odd = false;
  for (const auto& d : a.slots)
    if (monomial_odd(ctx, d)) d_odd = !d_odd;
  if (d_odd && monomial_odd(ctx, b.coeff)) s = -s;
  k.slots = a.slots;
  k.slots.insert(k.slots.end(), b.slots.begin(), b.slots.end());
  return {s, k};
}

long long apply_key(const GradedContext& ctx, const OpKey& k, const std::vector<Monomial>& args, Monomial& out) {
  long long f = 1;
  bool flip = false;
  bool args_odd = false;
  out = k.coeff;
  Monomial da, next;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args_odd && monomial_odd(ctx, k.slots[i])) flip = !flip;
    long long g = apply_derivative(ctx, k.slots[i], args[i], da);
    if (g == 0) return 0;
    f *= g;
    int s = monomial_mul(ctx, out, da, next);
    if (s == 0) return 0;
    f *= s;
    out = next;
    if (monomial_odd(ctx, args[i])) args_odd = !args_odd;
  }
  return flip ? -f : f;
}

}  // namespace relform
