#pragma once

#include <optional>
#include <vector>

#include "relform/derived.hpp"
#include "relform/kontsevich.hpp"

namespace relform {

using WeightedOp = MultiDiffOpT<WeightExpr>;

// Truncated power series in epsilon with operator coefficients.
class FormalSeries {
 public:
  FormalSeries(Context ctx, unsigned order);

  unsigned order() const { return static_cast<unsigned>(coeffs_.size()) - 1; }
  const Context& context() const { return ctx_; }
  const WeightedOp& operator[](unsigned k) const { return coeffs_.at(k); }
  WeightedOp& operator[](unsigned k) { return coeffs_.at(k); }
  // Coefficient of epsilon^k restricted to arity m.
  WeightedOp component(unsigned k, std::size_t m) const { return coeffs_.at(k).arity_component(m); }
  std::size_t max_arity() const;

  FormalSeries& operator+=(const FormalSeries& o);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  bool operator==(const FormalSeries& o) const { return coeffs_ == o.coeffs_; }

 private:
  Context ctx_;
  std::vector<WeightedOp> coeffs_;
};

// Truncated power series of elements of A.
using PolySeries = std::vector<WeightedPoly>;

struct StarOptions {
  unsigned order = 2;
  // Largest arity of the assembled operators.
  std::size_t max_arity = 3;
};

// mu = mu_A + sum_n eps^n / n! U_n(lambda, ..., lambda).
FormalSeries star_assemble(const PInfinityStructure& lambda, const StarOptions& opts, WeightRegistry& reg);
FormalSeries star_assemble(const MultiVector& pi, const SubmanifoldSpec& spec, const StarOptions& opts,
                           WeightRegistry& reg);

// sum_k eps^k mu^(k)_n(args) with n = args.size().
PolySeries evaluate(const FormalSeries& mu, const std::vector<GradedPoly>& args);

// Associativity relations of the A-infinity structure on the arguments, one entry per epsilon order.
PolySeries a_infinity_residual(const FormalSeries& mu, const std::vector<GradedPoly>& args);
// [mu, mu]_G on the arguments, rescaled to match the A-infinity relations term by term.
PolySeries maurer_cartan_residual(const FormalSeries& mu, const std::vector<GradedPoly>& args);

struct Anomaly {
  WeightedPoly first_order;
  WeightedPoly curvature;
  WeightedPoly differential;
  bool closed_exactly = false;
  bool closed = false;
};

// F = eps^2 coefficient of mu_0, and d F with d the eps^1 arity-one part of mu.
Anomaly mu0_anomaly(const FormalSeries& mu, const WeightRegistry& reg, double sigmas = 3);

// Conjugation by the coalgebra automorphism with constant term a (a[k] is the eps^k part).
FormalSeries apply_gauge(const FormalSeries& mu, const PolySeries& a);

// a_1 of degree 1 with d a_1 = -F over polynomials of total exponent <= max_degree.
std::optional<WeightedPoly> solve_gauge_step(const FormalSeries& mu, const WeightedPoly& curvature,
                                             unsigned max_degree);

}  // namespace relform
