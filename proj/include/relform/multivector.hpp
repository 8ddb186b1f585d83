#pragma once

#include "relform/graded_core.hpp"

namespace relform {

// Multivector fields are polynomials in a doubled context; the shifted
// degree is the polynomial degree minus one.
template <class R>
using MultiVectorT = Poly<R>;
using MultiVector = MultiVectorT<Rational>;

inline void require_doubled(const Context& ctx) {
  if (!ctx || !ctx->is_doubled()) throw ContextMismatch();
}

int mv_degree(const MultiVector& g);

// Right-derivative form: sum_i (g1 <-d_theta_i)(d_x_i g2) - (g1 <-d_x_i)(d_theta_i g2).
template <class R>
Poly<R> schouten(const Poly<R>& g1, const Poly<R>& g2) {
  require_same(g1.context(), g2.context());
  require_doubled(g1.context());
  const auto& ctx = *g1.context();
  Poly<R> out(g1.context());
  for (std::size_t i = 0; i < ctx.pair_count(); ++i) {
    std::size_t t = ctx.conjugate(i);
    out += poly_mul(right_partial(g1, t), left_partial(g2, i));
    out -= poly_mul(right_partial(g1, i), left_partial(g2, t));
  }
  return out;
}

// Left-derivative form, applied to each homogeneous component of g1.
template <class R>
Poly<R> schouten_left(const Poly<R>& g1, const Poly<R>& g2) {
  require_same(g1.context(), g2.context());
  require_doubled(g1.context());
  const auto& ctx = *g1.context();
  Poly<R> out(g1.context());
  for (const auto& [deg, comp] : g1.components()) {
    int shifted = deg - 1;
    for (std::size_t i = 0; i < ctx.pair_count(); ++i) {
      std::size_t t = ctx.conjugate(i);
      int eps = ctx.degree(i);
      Poly<R> a = poly_mul(left_partial(comp, t), left_partial(g2, i));
      Poly<R> b = poly_mul(left_partial(comp, i), left_partial(g2, t));
      if (odd_degree((1 - eps) * shifted)) a = -a;
      if (odd_degree(eps * shifted)) b = -b;
      out += a;
      out -= b;
    }
  }
  return out;
}

bool check_poisson(const MultiVector& pi);

}  // namespace relform
