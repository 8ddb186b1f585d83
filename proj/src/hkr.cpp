#include "relform/hkr.hpp"

#include <algorithm>

namespace relform {

KeyTerms hkr_terms(const GradedContext& doubled, const Monomial& m) {
  const std::size_t d = doubled.pair_count();
  const GradedContext& base = *doubled.base();
  Monomial coeff(d);
  std::vector<int> idx;
  Rational norm(1);
  for (std::size_t i = 0; i < d; ++i) {
    coeff.exp[i] = m.exp[i];
    unsigned k = m.exp[doubled.conjugate(i)];
    for (unsigned e = 1; e <= k; ++e) {
      idx.push_back(static_cast<int>(i));
      norm *= static_cast<long>(e);
    }
  }
  const std::size_t n = idx.size();
  for (std::size_t e = 2; e <= n; ++e) norm /= static_cast<long>(e);
  std::vector<int> theta_deg(n);
  for (std::size_t a = 0; a < n; ++a) theta_deg[a] = 1 - base.degree(idx[a]);

  KeyTerms out;
  std::vector<int> tau = idx;
  do {
    // sigma: sorted position -> position in the arrangement
    std::vector<int> sigma(n);
    std::vector<bool> taken(n, false);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (!taken[q] && tau[q] == idx[p]) {
          taken[q] = true;
          sigma[p] = static_cast<int>(q);
          break;
        }
    int s = permutation_sign(sigma, theta_deg);
    int twist = 0;
    for (std::size_t a = 0; a < n; ++a) twist += static_cast<int>(a) * base.degree(tau[a]);
    if (odd_degree(twist)) s = -s;
    std::vector<Monomial> slots(n, Monomial(d));
    for (std::size_t a = 0; a < n; ++a) slots[a].exp[tau[a]] = 1;
    out.emplace_back(s > 0 ? norm : Rational(-norm), OpKey{coeff, std::move(slots)});
  } while (std::next_permutation(tau.begin(), tau.end()));
  return out;
}

std::vector<Monomial> monomials_up_to(const GradedContext& ctx, unsigned max_degree) {
  std::vector<Monomial> out;
  Monomial cur(ctx.size());
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == ctx.size()) {
      out.push_back(cur);
      return;
    }
    unsigned cap = ctx.odd(i) ? std::min(left, 1u) : left;
    for (unsigned e = 0; e <= cap; ++e) {
      cur.exp[i] = e;
      self(self, i + 1, left - e);
    }
    cur.exp[i] = 0;
  };
  rec(rec, 0, max_degree);
  return out;
}

namespace {

GradedPoly mono_poly(const Context& ctx, const Monomial& m) {
  GradedPoly p(ctx);
  p.add_term(m, Rational(1));
  return p;
}

bool check_component(const MultiDiffOp& phi, std::size_t m, int deg, const std::vector<Monomial>& tests) {
  const Context& ctx = phi.context();
  std::vector<GradedPoly> polys;
  for (const auto& t : tests) polys.push_back(mono_poly(ctx, t));
  std::vector<std::size_t> pick(m, 0);
  auto degree_of = [&](std::size_t i) { return monomial_degree(*ctx, tests[i]); };
  // Enumerate all m-tuples of test monomials.
  for (;;) {
    std::vector<GradedPoly> args;
    int sum_prev = 0;
    for (std::size_t i = 0; i < m; ++i) args.push_back(polys[pick[i]]);
    for (std::size_t i = 0; i + 1 < m; ++i) sum_prev += degree_of(pick[i]);
    // derivation in the last slot: split the last argument as f*g
    for (std::size_t fi = 0; fi < tests.size(); ++fi) {
      for (std::size_t gi = 0; gi < tests.size(); ++gi) {
        auto fg = polys[fi] * polys[gi];
        args[m - 1] = fg;
        GradedPoly lhs = apply_op(phi, args);
        args[m - 1] = polys[fi];
        GradedPoly rhs = apply_op(phi, args) * polys[gi];
        args[m - 1] = polys[gi];
        GradedPoly second = polys[fi] * apply_op(phi, args);
        if (odd_degree(degree_of(fi) * (deg + sum_prev))) rhs -= second;
        else rhs += second;
        if (!(lhs == rhs)) return false;
      }
    }
    args[m - 1] = polys[pick[m - 1]];
    // graded alternation under adjacent transpositions
    for (std::size_t i = 0; i + 1 < m; ++i) {
      std::vector<GradedPoly> swapped = args;
      std::swap(swapped[i], swapped[i + 1]);
      GradedPoly a = apply_op(phi, args);
      GradedPoly b = apply_op(phi, swapped);
      if (odd_degree(degree_of(pick[i]) * degree_of(pick[i + 1]))) a -= b;
      else a += b;
      if (!a.is_zero()) return false;
    }
    std::size_t k = 0;
    while (k < m && ++pick[k] == tests.size()) pick[k++] = 0;
    if (k == m) break;
  }
  return true;
}

}  // namespace

bool is_hkr_cocycle(const MultiDiffOp& phi, unsigned max_degree) {
  if (phi.is_zero()) return true;
  auto tests = monomials_up_to(*phi.context(), max_degree);
  for (const auto& [key, comp] : phi.components()) {
    if (key.first == 0) continue;
    if (!check_component(comp, key.first, key.second, tests)) return false;
  }
  return true;
}

}  // namespace relform
