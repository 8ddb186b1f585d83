#include "relform/quantize.hpp"

#include <functional>

#include "relform/hkr.hpp"
#include "relform/linalg.hpp"

namespace relform {

FormalSeries::FormalSeries(Context ctx, unsigned order) : ctx_(std::move(ctx)), coeffs_(order + 1, WeightedOp(ctx_)) {}

std::size_t FormalSeries::max_arity() const {
  std::size_t m = 0;
  for (const auto& c : coeffs_)
    for (std::size_t a : c.arities()) m = std::max(m, a);
  return m;
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  if (o.order() != order()) throw ArityMismatch("series of different truncation orders");
  for (unsigned k = 0; k <= order(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

namespace {

Rational factorial(unsigned n) {
  Rational f(1);
  for (unsigned k = 2; k <= n; ++k) f *= static_cast<long>(k);
  return f;
}

int require_homogeneous(const GradedPoly& p) {
  auto d = p.degree();
  if (!d && !p.is_zero()) throw DegreeError("arguments must be homogeneous");
  return d.value_or(0);
}

}  // namespace

FormalSeries star_assemble(const PInfinityStructure& lambda, const StarOptions& opts, WeightRegistry& reg) {
  const Context& base = lambda.dict().a_side()->base();
  FormalSeries mu(base, opts.order);
  mu[0] = WeightedOp::product(base, 2);
  MultiVector total = lambda.total();
  if (total.is_zero()) return mu;
  for (unsigned n = 1; n <= opts.order; ++n) {
    std::vector<MultiVector> gammas(n, total);
    mu[n] = formality_map(gammas, reg, static_cast<int>(opts.max_arity)).scaled(WeightExpr(1 / factorial(n)));
  }
  return mu;
}

FormalSeries star_assemble(const MultiVector& pi, const SubmanifoldSpec& spec, const StarOptions& opts,
                           WeightRegistry& reg) {
  if (!check_poisson(pi)) throw AlgebraError("bivector is not Poisson");
  // U_n only reads components of arity up to max_arity + 2n - 2
  std::size_t lambda_arity = opts.max_arity + 2 * opts.order;
  return star_assemble(pinfinity_from_poisson(pi, spec, lambda_arity), opts, reg);
}

namespace {

std::vector<WeightedPoly> weighted_args(const std::vector<GradedPoly>& args) {
  std::vector<WeightedPoly> out;
  for (const auto& a : args) out.push_back(to_weighted(a));
  return out;
}

WeightedPoly apply_component(const WeightedOp& op, const std::vector<WeightedPoly>& args, const Context& ctx) {
  auto part = op.arity_component(args.size());
  if (part.is_zero()) return WeightedPoly(ctx);
  return apply_op(part, args);
}

}  // namespace

PolySeries evaluate(const FormalSeries& mu, const std::vector<GradedPoly>& args) {
  auto wargs = weighted_args(args);
  PolySeries out;
  for (unsigned k = 0; k <= mu.order(); ++k) out.push_back(apply_component(mu[k], wargs, mu.context()));
  return out;
}

PolySeries a_infinity_residual(const FormalSeries& mu, const std::vector<GradedPoly>& args) {
  const Context& ctx = mu.context();
  const int n = static_cast<int>(args.size());
  std::vector<int> deg;
  for (const auto& a : args) deg.push_back(require_homogeneous(a));
  auto wargs = weighted_args(args);
  PolySeries out(mu.order() + 1, WeightedPoly(ctx));
  for (unsigned k = 0; k <= mu.order(); ++k)
    for (unsigned k2 = 0; k2 <= k; ++k2) {
      const unsigned k1 = k - k2;
      for (int q = 0; q <= n; ++q) {
        int prefix = 0;
        for (int j = 0; j <= n - q; ++j) {
          if (j > 0) prefix += deg[j - 1];
          std::vector<WeightedPoly> inner(wargs.begin() + j, wargs.begin() + j + q);
          WeightedPoly v = apply_component(mu[k2], inner, ctx);
          if (v.is_zero()) continue;
          std::vector<WeightedPoly> outer(wargs.begin(), wargs.begin() + j);
          outer.push_back(v);
          outer.insert(outer.end(), wargs.begin() + j + q, wargs.end());
          WeightedPoly w = apply_component(mu[k1], outer, ctx);
          if (odd_degree(q * (n - q) + (q - 1) * j + prefix * q)) out[k] -= w;
          else out[k] += w;
        }
      }
    }
  return out;
}

PolySeries maurer_cartan_residual(const FormalSeries& mu, const std::vector<GradedPoly>& args) {
  const Context& ctx = mu.context();
  const int n = static_cast<int>(args.size());
  std::vector<int> deg;
  for (const auto& a : args) deg.push_back(require_homogeneous(a));
  auto wargs = weighted_args(args);
  // the bracket is twice the coderivation square, which picks up (-1)^n against the relations
  WeightExpr scale(Rational(odd_degree(n) ? -1 : 1, 2));
  PolySeries out(mu.order() + 1, WeightedPoly(ctx));
  for (unsigned k = 0; k <= mu.order(); ++k)
    for (unsigned k2 = 0; k2 <= k; ++k2) {
      auto br = gerstenhaber_bracket(mu[k - k2], mu[k2]);
      WeightedPoly v = apply_component(br, wargs, ctx);
      if (!v.is_zero()) out[k] += v * WeightedPoly::constant(ctx, scale);
    }
  return out;
}

Anomaly mu0_anomaly(const FormalSeries& mu, const WeightRegistry& reg, double sigmas) {
  if (mu.order() < 2) throw AlgebraError("the anomaly needs the series to order 2");
  const Context& ctx = mu.context();
  Anomaly a{mu.component(1, 0).as_poly(), mu.component(2, 0).as_poly(), WeightedPoly(ctx)};
  if (!a.curvature.is_zero()) a.differential = apply_component(mu[1], {a.curvature}, ctx);
  a.closed_exactly = a.differential.is_zero();
  a.closed = a.closed_exactly || deviation(a.differential, reg).max_sigma < sigmas;
  return a;
}

namespace {

// op with the constant a in slot q, times (-1)^{|a| (|b_1|+...+|b_{q-1}|)} so that the
// result is again in normal form.
WeightedOp plug(const WeightedOp& op, std::size_t q, const WeightedPoly& a) {
  const auto& ctx = *op.context();
  WeightedOp out(op.context());
  Monomial x, coeff;
  for (const auto& [key, c] : op.terms()) {
    if (key.slots.size() <= q) continue;
    for (const auto& [ma, r] : a.terms()) {
      long long f = apply_derivative(ctx, key.slots[q], ma, x);
      if (f == 0) continue;
      bool flip = false;
      const bool x_odd = monomial_odd(ctx, x), a_odd = monomial_odd(ctx, ma);
      for (std::size_t j = 0; j < key.slots.size(); ++j) {
        if (j < q && x_odd && monomial_odd(ctx, key.slots[j])) flip = !flip;
        if (j > q && a_odd && monomial_odd(ctx, key.slots[j])) flip = !flip;
      }
      int s = monomial_mul(ctx, key.coeff, x, coeff);
      if (s == 0) continue;
      OpKey nk{coeff, key.slots};
      nk.slots.erase(nk.slots.begin() + static_cast<long>(q));
      long long factor = f * s * (flip ? -1 : 1);
      out.add_term(nk, c * r * WeightExpr(Rational(static_cast<long>(factor))));
    }
  }
  return out;
}

}  // namespace

FormalSeries apply_gauge(const FormalSeries& mu, const PolySeries& a) {
  const Context& ctx = mu.context();
  const unsigned K = mu.order();
  if (!a.empty() && !a[0].is_zero()) throw DegreeError("gauge parameter must start at order epsilon");
  for (const auto& ak : a)
    for (const auto& [m, c] : ak.terms())
      if (monomial_degree(*ctx, m) != 1) throw DegreeError("gauge parameter must have degree 1");
  auto a_at = [&](unsigned k) { return k < a.size() ? a[k] : WeightedPoly(ctx); };
  FormalSeries out(ctx, K);
  const std::size_t top = mu.max_arity();
  for (std::size_t N = 0; N <= top; ++N)
    for (unsigned k0 = 0; k0 <= K; ++k0) {
      WeightedOp base = mu.component(k0, N);
      if (base.is_zero()) continue;
      // sign (-1)^{sum_j (n - j) + (N - p_j)} over the b slots p_1 < ... < p_n
      auto rec_outer = [&](auto&& self, std::size_t slot, std::size_t pos, const WeightedOp& op, unsigned order,
                           int sign_exp, std::size_t nb) -> void {
        if (slot == N) {
          int s = sign_exp + static_cast<int>(nb * (nb == 0 ? 0 : nb - 1) / 2);
          out[order] += odd_degree(s) ? -op : op;
          return;
        }
        self(self, slot + 1, pos + 1, op, order, sign_exp + static_cast<int>(N - (slot + 1)), nb + 1);
        for (unsigned ka = 1; order + ka <= K; ++ka) {
          WeightedPoly ak = a_at(ka);
          if (ak.is_zero()) continue;
          WeightedOp plugged = plug(op, pos, ak);
          if (plugged.is_zero()) continue;
          self(self, slot + 1, pos, plugged, order + ka, sign_exp, nb);
        }
      };
      rec_outer(rec_outer, 0, 0, base, k0, 0, 0);
    }
  return out;
}

std::optional<WeightedPoly> solve_gauge_step(const FormalSeries& mu, const WeightedPoly& curvature,
                                             unsigned max_degree) {
  const Context& ctx = mu.context();
  if (mu.order() < 1) throw AlgebraError("the differential needs the series to order 1");
  WeightedOp d = mu.component(1, 1);
  for (const auto& [k, c] : d.terms())
    if (!c.is_rational()) throw AlgebraError("first-order differential must be exact");
  MultiDiffOp dq(ctx);
  for (const auto& [k, c] : d.terms()) dq.add_term(k, c.rational_part());

  std::vector<Monomial> basis;
  for (const auto& m : monomials_up_to(*ctx, max_degree))
    if (monomial_degree(*ctx, m) == 1) basis.push_back(m);
  std::map<Monomial, std::size_t> index;
  auto idx = [&](const Monomial& m) {
    auto [it, ins] = index.try_emplace(m, index.size());
    return it->second;
  };
  std::vector<SparseVector> columns;
  for (const auto& b : basis) {
    GradedPoly arg(ctx);
    arg.add_term(b, Rational(1));
    SparseVector col;
    const GradedPoly image = apply_op(dq, {arg});
    for (const auto& [m, c] : image.terms()) col[idx(m)] = c;
    columns.push_back(col);
  }
  // split the curvature by monomials in the weight symbols and solve each rational system
  std::map<WeightExpr::Key, SparseVector> rhs;
  for (const auto& [m, w] : curvature.terms())
    for (const auto& [key, c] : w.terms()) rhs[key][idx(m)] = -c;
  WeightedPoly out(ctx);
  for (const auto& [key, vec] : rhs) {
    auto sol = solve_sparse(columns, vec);
    if (!sol) return std::nullopt;
    WeightExpr unit;
    unit.add(key, Rational(1));
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sgn((*sol)[j]) != 0) out.add_term(basis[j], unit * (*sol)[j]);
  }
  return out;
}

}  // namespace relform
