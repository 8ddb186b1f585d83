#pragma once

#include <optional>
#include <random>

#include "relform/hkr.hpp"
#include "relform/hochschild.hpp"

namespace relform::testing {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  Rational coeff() {
    int num = 0;
    while (num == 0) num = uniform(-4, 4);
    Rational r(num, uniform(1, 3));
    r.canonicalize();
    return r;
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
};

inline std::vector<Monomial> monomials_of_degree(const Context& ctx, unsigned max_total, std::optional<int> degree) {
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to(*ctx, max_total))
    if (!degree || monomial_degree(*ctx, m) == *degree) out.push_back(m);
  return out;
}

inline GradedPoly random_poly(const Context& ctx, unsigned max_total, int nterms, Rng& rng,
                              std::optional<int> degree = std::nullopt) {
  GradedPoly p(ctx);
  auto monos = monomials_of_degree(ctx, max_total, degree);
  if (monos.empty()) return p;
  for (int i = 0; i < nterms; ++i) p.add_term(rng.pick(monos), rng.coeff());
  return p;
}

// Random operator of fixed arity; when degree is given every term has that internal degree.
inline MultiDiffOp random_op(const Context& ctx, std::size_t arity, unsigned max_coeff, unsigned max_order, int nterms,
                             Rng& rng, std::optional<int> degree = std::nullopt) {
  MultiDiffOp op(ctx);
  auto coeffs = monomials_up_to(*ctx, max_coeff);
  auto slots = monomials_up_to(*ctx, max_order);
  int guard = 0;
  for (int i = 0; i < nterms && guard < 1000; ++guard) {
    OpKey k{rng.pick(coeffs), {}};
    for (std::size_t j = 0; j < arity; ++j) k.slots.push_back(rng.pick(slots));
    if (degree && key_degree(*ctx, k) != *degree) continue;
    op.add_term(k, rng.coeff());
    ++i;
  }
  return op;
}

inline int op_degree(const MultiDiffOp& op) {
  auto c = op.components();
  if (c.size() != 1) throw DegreeError("operator not homogeneous");
  return c.begin()->first.second;
}

inline int poly_degree(const GradedPoly& p) { return p.degree().value_or(0); }

}  // namespace relform::testing
