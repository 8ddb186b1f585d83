#pragma once

#include "relform/hochschild.hpp"

namespace relform {

// Operator terms (over the base context) of one monomial of the doubled context.
KeyTerms hkr_terms(const GradedContext& doubled, const Monomial& m);

template <class R>
MultiDiffOpT<R> hkr(const Poly<R>& gamma) {
  require_doubled(gamma.context());
  MultiDiffOpT<R> out(gamma.context()->base());
  for (const auto& [m, c] : gamma.terms()) out.add_terms(hkr_terms(*gamma.context(), m), c);
  return out;
}

// All monomials of total exponent <= max_degree (odd variables at most once).
std::vector<Monomial> monomials_up_to(const GradedContext& ctx, unsigned max_degree);

bool is_hkr_cocycle(const MultiDiffOp& phi, unsigned max_degree = 2);

}  // namespace relform
