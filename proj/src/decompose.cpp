#include <algorithm>

#include "relform/hkr.hpp"
#include "relform/linalg.hpp"

namespace relform {

namespace {

std::vector<Monomial> monomials_exact(const GradedContext& ctx, std::size_t first, std::size_t count, unsigned total) {
  std::vector<Monomial> out;
  Monomial cur(ctx.size());
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == first + count) {
      if (left == 0) out.push_back(cur);
      return;
    }
    unsigned cap = ctx.odd(i) ? std::min(left, 1u) : left;
    for (unsigned e = 0; e <= cap; ++e) {
      cur.exp[i] = e;
      self(self, i + 1, left - e);
    }
    cur.exp[i] = 0;
  };
  rec(rec, first, total);
  return out;
}

}  // namespace

std::optional<Decomposition> truncated_decompose(const MultiDiffOp& phi, const Context& doubled,
                                                 unsigned max_poly_degree) {
  require_doubled(doubled);
  require_same(phi.context(), doubled->base());
  if (!hochschild_b(phi).is_zero()) throw AlgebraError("truncated_decompose needs a Hochschild cocycle");
  const GradedContext& base = *doubled->base();
  const std::size_t d = base.size();
  Decomposition result{MultiVector(doubled), MultiDiffOp(doubled->base())};

  auto coeffs = monomials_up_to(base, max_poly_degree);
  for (const auto& [key, comp] : phi.components()) {
    const std::size_t m = key.first;
    const int p = key.second;
    unsigned max_order = 0;
    for (const auto& [k, c] : comp.terms()) {
      unsigned t = 0;
      for (const auto& s : k.slots) t += s.total();
      max_order = std::max(max_order, t);
    }

    std::map<OpKey, std::size_t> rows;
    auto row_of = [&](const OpKey& k) { return rows.try_emplace(k, rows.size()).first->second; };
    std::vector<SparseVector> columns;
    auto column_from = [&](const MultiDiffOp& op) {
      SparseVector col;
      for (const auto& [k, c] : op.terms()) col[row_of(k)] = c;
      return col;
    };

    // HKR candidates: coefficient monomial times theta-monomial of arity m.
    std::vector<Monomial> gamma_basis;
    for (const auto& th : monomials_exact(*doubled, d, d, static_cast<unsigned>(m)))
      for (const auto& c : coeffs) {
        Monomial g = th;
        for (std::size_t i = 0; i < d; ++i) g.exp[i] = c.exp[i];
        if (monomial_degree(*doubled, g) - static_cast<int>(m) != p) continue;
        MultiVector gp(doubled);
        gp.add_term(g, Rational(1));
        MultiDiffOp img = hkr(gp);
        if (img.is_zero()) continue;
        gamma_basis.push_back(g);
        columns.push_back(column_from(img));
      }

    // Primitive candidates of arity m-1.
    std::vector<OpKey> eta_basis;
    if (m >= 1) {
      std::vector<Monomial> slot_monos = monomials_up_to(base, max_order);
      std::vector<std::size_t> pick(m - 1, 0);
      for (const auto& c : coeffs) {
        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
          OpKey k{c, {}};
          unsigned order = 0;
          for (auto i : pick) {
            k.slots.push_back(slot_monos[i]);
            order += slot_monos[i].total();
          }
          if (order <= max_order && key_degree(base, k) == p) {
            MultiDiffOp e(doubled->base());
            e.add_term(k, Rational(1));
            MultiDiffOp img = hochschild_b(e);
            if (!img.is_zero()) {
              eta_basis.push_back(k);
              columns.push_back(column_from(img));
            }
          }
          std::size_t j = 0;
          while (j < pick.size() && ++pick[j] == slot_monos.size()) pick[j++] = 0;
          if (j == pick.size()) break;
        }
      }
    }

    SparseVector rhs = column_from(comp);
    auto sol = solve_sparse(columns, rhs);
    if (!sol) return std::nullopt;
    for (std::size_t i = 0; i < gamma_basis.size(); ++i) result.hkr_part.add_term(gamma_basis[i], (*sol)[i]);
    for (std::size_t i = 0; i < eta_basis.size(); ++i)
      result.primitive.add_term(eta_basis[i], (*sol)[gamma_basis.size() + i]);
  }
  return result;
}

}  // namespace relform
