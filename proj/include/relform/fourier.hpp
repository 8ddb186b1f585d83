#pragma once

#include <string>
#include <vector>

#include "relform/multivector.hpp"

namespace relform {

// Generator dictionary between the two sides of the local Fourier transform.
//   A side base: x_i, th_<y> (degree 1); doubled adds d_<x> (xi) and d_th_<y> (psi, degree 0)
//   B side base: x_i, y (degree 0);        doubled adds d_<x> (xi) and d_<y> (eta, degree 1)
class FourierDictionary {
 public:
  FourierDictionary(std::vector<Variable> base_vars, std::vector<std::string> fiber_names);

  std::size_t base_count() const { return nbase_; }
  std::size_t fiber_count() const { return nfiber_; }
  const Context& a_base() const { return a_base_; }
  const Context& a_side() const { return a_side_; }
  const Context& b_base() const { return b_base_; }
  const Context& b_side() const { return b_side_; }

  std::size_t a_x(std::size_t i) const { return i; }
  std::size_t a_theta(std::size_t mu) const { return nbase_ + mu; }
  std::size_t a_xi(std::size_t i) const { return a_side_->conjugate(i); }
  std::size_t a_psi(std::size_t mu) const { return a_side_->conjugate(nbase_ + mu); }
  std::size_t b_x(std::size_t i) const { return i; }
  std::size_t b_y(std::size_t mu) const { return nbase_ + mu; }
  std::size_t b_xi(std::size_t i) const { return b_side_->conjugate(i); }
  std::size_t b_eta(std::size_t mu) const { return b_side_->conjugate(nbase_ + mu); }

  // Image of A-side variable v: (index on the B side, sign).
  std::pair<std::size_t, int> forward(std::size_t v) const;
  std::pair<std::size_t, int> backward(std::size_t v) const;

 private:
  std::size_t nbase_, nfiber_;
  Context a_base_, a_side_, b_base_, b_side_;
};

namespace detail {
template <class R, class Map>
Poly<R> substitute(const Poly<R>& p, const Context& target, Map image) {
  Poly<R> out(target);
  Monomial acc, next;
  for (const auto& [m, c] : p.terms()) {
    acc = Monomial(target->size());
    int sign = 1;
    for (std::size_t v = 0; v < m.exp.size() && sign != 0; ++v) {
      if (m.exp[v] == 0) continue;
      auto [w, s] = image(v);
      Monomial g(target->size());
      g.exp[w] = m.exp[v];
      if (s < 0 && (m.exp[v] & 1u)) sign = -sign;
      sign *= monomial_mul(*target, acc, g, next);
      acc = next;
    }
    if (sign != 0) out.add_term(acc, sign > 0 ? c : R(-c));
  }
  return out;
}
}  // namespace detail

template <class R>
Poly<R> fourier(const FourierDictionary& dict, const Poly<R>& a) {
  require_same(a.context(), dict.a_side());
  return detail::substitute(a, dict.b_side(), [&](std::size_t v) { return dict.forward(v); });
}

template <class R>
Poly<R> fourier_inverse(const FourierDictionary& dict, const Poly<R>& b) {
  require_same(b.context(), dict.b_side());
  return detail::substitute(b, dict.a_side(), [&](std::size_t v) { return dict.backward(v); });
}

// Inverse image of the fibre-Taylor truncation (order <= max_order in y) of a B-side bivector.
MultiVector fourier_poisson_to_lambda(const FourierDictionary& dict, const MultiVector& pi, unsigned max_order);

// Drops monomials of total y-degree above max_order (B side).
template <class R>
Poly<R> truncate_fibre(const FourierDictionary& dict, const Poly<R>& p, unsigned max_order) {
  return p.filtered([&](const Monomial& m) {
    unsigned t = 0;
    for (std::size_t mu = 0; mu < dict.fiber_count(); ++mu) t += m.exp[dict.b_y(mu)];
    return t <= max_order;
  });
}

}  // namespace relform
