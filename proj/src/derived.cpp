#include "relform/derived.hpp"

#include <algorithm>

namespace relform {

namespace {

std::vector<Variable> split_base(const Context& ambient, const std::vector<std::string>& transverse) {
  std::vector<Variable> base;
  const auto& plain = ambient->is_doubled() ? ambient->base() : ambient;
  for (const auto& v : plain->variables())
    if (std::find(transverse.begin(), transverse.end(), v.name) == transverse.end()) base.push_back(v);
  return base;
}

// Calls f on every choice of homogeneous components of the arguments and sums.
template <class F>
GradedPoly expand_components(const std::vector<GradedPoly>& args, const Context& out_ctx, F f) {
  GradedPoly out(out_ctx);
  std::vector<std::vector<std::pair<int, GradedPoly>>> comps;
  for (const auto& a : args) {
    if (a.is_zero()) return out;
    auto c = a.components();
    comps.emplace_back(c.begin(), c.end());
  }
  std::vector<GradedPoly> pick(args.size());
  std::vector<int> degs(args.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == args.size()) {
      out += f(pick, degs);
      return;
    }
    for (const auto& [d, p] : comps[i]) {
      pick[i] = p;
      degs[i] = d;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// (-1)^{sum (n-i) deg(a_i)} with deg = A-degree - 1; this twist makes the L-infinity relations hold.
bool twist_odd(const std::vector<int>& a_degrees) {
  const int n = static_cast<int>(a_degrees.size());
  int s = 0;
  for (int i = 0; i < n; ++i) s += (n - 1 - i) * (a_degrees[i] - 1);
  return odd_degree(s);
}

MultiVector iterate_brackets(MultiVector z, const std::vector<MultiVector>& args) {
  for (const auto& a : args) z = schouten(z, a);
  return z;
}

std::vector<Monomial> conjugate_multisets(const GradedContext& doubled, std::size_t n) {
  std::vector<Monomial> out;
  const std::size_t first = doubled.pair_count();
  Monomial cur(doubled.size());
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == doubled.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    std::size_t cap = doubled.odd(i) ? std::min<std::size_t>(left, 1) : left;
    for (std::size_t e = 0; e <= cap; ++e) {
      cur.exp[i] = static_cast<unsigned>(e);
      self(self, i + 1, left - e);
    }
    cur.exp[i] = 0;
  };
  rec(rec, first, n);
  return out;
}

}  // namespace

SubmanifoldSpec::SubmanifoldSpec(const Context& ambient, const std::vector<std::string>& transverse,
                                 unsigned truncation)
    : ambient_(ambient), transverse_(transverse), truncation_(truncation) {
  for (const auto& y : transverse) {
    std::size_t i = ambient->index(y);
    if (ambient->degree(i) != 0) throw DegreeError("transverse variable '" + y + "' must have degree 0");
    if (std::count(transverse.begin(), transverse.end(), y) != 1)
      throw AlgebraError("transverse variable '" + y + "' listed twice");
  }
  dict_ = std::make_shared<const FourierDictionary>(split_base(ambient, transverse), transverse);
}

MultiVector SubmanifoldSpec::to_b_side(const MultiVector& pi) const {
  if (same_context(pi.context(), dict_->b_side())) return pi;
  return change_context(pi, dict_->b_side());
}

MultiVector taylor_truncate(const MultiVector& pi, const SubmanifoldSpec& spec) {
  return truncate_fibre(spec.dict(), spec.to_b_side(pi), spec.truncation());
}

MultiVector project_b(const FourierDictionary& dict, const MultiVector& z) {
  require_same(z.context(), dict.b_side());
  return z.filtered([&](const Monomial& m) {
    for (std::size_t mu = 0; mu < dict.fiber_count(); ++mu)
      if (m.exp[dict.b_y(mu)]) return false;
    for (std::size_t i = 0; i < dict.base_count(); ++i)
      if (m.exp[dict.b_xi(i)]) return false;
    return true;
  });
}

MultiVector project_a(const FourierDictionary& dict, const MultiVector& z) {
  require_same(z.context(), dict.a_side());
  const std::size_t first = dict.a_side()->pair_count();
  return z.filtered([&](const Monomial& m) {
    for (std::size_t v = first; v < m.exp.size(); ++v)
      if (m.exp[v]) return false;
    return true;
  });
}

bool in_abelian(const FourierDictionary& dict, const MultiVector& z) { return project_b(dict, z) == z; }

MultiVector derived_bracket(const MultiVector& pi, const SubmanifoldSpec& spec, const std::vector<MultiVector>& args) {
  const auto& dict = spec.dict();
  std::vector<MultiVector> b_args;
  for (const auto& a : args) {
    MultiVector b = spec.to_b_side(a);
    if (!in_abelian(dict, b)) throw AlgebraError("derived bracket argument outside the abelian subalgebra");
    b_args.push_back(b);
  }
  return project_b(dict, iterate_brackets(taylor_truncate(pi, spec), b_args));
}

MultiVector lift_a(const FourierDictionary& dict, const GradedPoly& a) {
  require_same(a.context(), dict.a_base());
  MultiVector out(dict.a_side());
  const std::size_t n = dict.a_side()->size();
  for (const auto& [m, c] : a.terms()) {
    Monomial w(n);
    std::copy(m.exp.begin(), m.exp.end(), w.exp.begin());
    out.add_term(w, c);
  }
  return out;
}

GradedPoly lower_a(const FourierDictionary& dict, const MultiVector& z) {
  require_same(z.context(), dict.a_side());
  GradedPoly out(dict.a_base());
  const std::size_t n = dict.a_base()->size();
  for (const auto& [m, c] : z.terms()) {
    for (std::size_t v = n; v < m.exp.size(); ++v)
      if (m.exp[v]) throw AlgebraError("element does not lie in the base algebra");
    Monomial w(n);
    std::copy(m.exp.begin(), m.exp.begin() + n, w.exp.begin());
    out.add_term(w, c);
  }
  return out;
}

GradedPoly lambda_n(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t n,
                    const std::vector<GradedPoly>& args) {
  if (args.size() != n) throw ArityMismatch("lambda_n expects " + std::to_string(n) + " arguments");
  const auto& dict = spec.dict();
  MultiVector pi_b = taylor_truncate(pi, spec);
  return expand_components(args, dict.a_base(), [&](const std::vector<GradedPoly>& as, const std::vector<int>& degs) {
    std::vector<MultiVector> b_args;
    for (const auto& a : as) b_args.push_back(fourier(dict, lift_a(dict, a)));
    MultiVector z = project_b(dict, iterate_brackets(pi_b, b_args));
    GradedPoly r = lower_a(dict, fourier_inverse(dict, z));
    return twist_odd(degs) ? -r : r;
  });
}

bool is_coisotropic(const MultiVector& pi, const SubmanifoldSpec& spec) {
  const auto& dict = spec.dict();
  MultiVector pi_b = spec.to_b_side(pi);
  for (std::size_t mu = 0; mu < dict.fiber_count(); ++mu)
    for (std::size_t nu = mu + 1; nu < dict.fiber_count(); ++nu) {
      MultiVector ym = MultiVector::variable(dict.b_side(), dict.b_y(mu));
      MultiVector yn = MultiVector::variable(dict.b_side(), dict.b_y(nu));
      MultiVector br = schouten(schouten(pi_b, ym), yn);
      MultiVector on_c = br.filtered([&](const Monomial& m) {
        for (std::size_t k = 0; k < dict.fiber_count(); ++k)
          if (m.exp[dict.b_y(k)]) return false;
        return true;
      });
      if (!on_c.is_zero()) return false;
    }
  return true;
}

PInfinityStructure::PInfinityStructure(std::shared_ptr<const FourierDictionary> dict, std::vector<MultiVector> lambdas)
    : dict_(std::move(dict)), lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) lambdas_.emplace_back(dict_->a_side());
  for (const auto& l : lambdas_) require_same(l.context(), dict_->a_side());
}

MultiVector PInfinityStructure::total() const {
  MultiVector t(dict_->a_side());
  for (const auto& l : lambdas_) t += l;
  return t;
}

GradedPoly PInfinityStructure::evaluate(std::size_t n, const std::vector<GradedPoly>& args) const {
  if (args.size() != n) throw ArityMismatch("lambda evaluation expects " + std::to_string(n) + " arguments");
  if (n >= lambdas_.size()) return GradedPoly(dict_->a_base());
  const auto& dict = *dict_;
  return expand_components(args, dict.a_base(), [&](const std::vector<GradedPoly>& as, const std::vector<int>& degs) {
    std::vector<MultiVector> lifted;
    for (const auto& a : as) lifted.push_back(lift_a(dict, a));
    GradedPoly r = lower_a(dict, project_a(dict, iterate_brackets(lambdas_[n], lifted)));
    return twist_odd(degs) ? -r : r;
  });
}

PInfinityStructure pinfinity_from_poisson(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t max_arity) {
  const auto& dict = spec.dict();
  MultiVector full = fourier_poisson_to_lambda(dict, spec.to_b_side(pi), spec.truncation());
  const std::size_t first = dict.a_side()->pair_count();
  std::vector<MultiVector> lambdas(max_arity + 1, MultiVector(dict.a_side()));
  for (const auto& [m, c] : full.terms()) {
    std::size_t arity = 0;
    for (std::size_t v = first; v < m.exp.size(); ++v) arity += m.exp[v];
    if (arity <= max_arity) lambdas[arity].add_term(m, c);
  }
  return PInfinityStructure(spec.dict_ptr(), std::move(lambdas));
}

PInfinityStructure pinfinity_from_brackets(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t max_arity) {
  const auto& dict = spec.dict();
  const auto& doubled = *dict.a_side();
  const std::size_t first = doubled.pair_count();
  std::vector<MultiVector> lambdas(max_arity + 1, MultiVector(dict.a_side()));
  for (std::size_t n = 0; n <= max_arity; ++n) {
    for (const auto& s : conjugate_multisets(doubled, n)) {
      std::vector<GradedPoly> gens;
      for (std::size_t v = first; v < s.exp.size(); ++v)
        for (unsigned e = 0; e < s.exp[v]; ++e) gens.push_back(GradedPoly::variable(dict.a_base(), v - first));
      GradedPoly value = lambda_n(pi, spec, n, gens);
      if (value.is_zero()) continue;
      MultiVector probe(dict.a_side());
      probe.add_term(s, Rational(1));
      std::vector<MultiVector> only(n + 1, MultiVector(dict.a_side()));
      only[n] = probe;
      GradedPoly kappa = PInfinityStructure(spec.dict_ptr(), only).evaluate(n, gens);
      if (kappa.size() != 1 || !kappa.terms().begin()->first.is_one())
        throw AlgebraError("generator probe did not return a nonzero constant");
      Rational scale = 1 / kappa.terms().begin()->second;
      lambdas[n] += poly_mul(lift_a(dict, value), probe).scaled(scale);
    }
  }
  return PInfinityStructure(spec.dict_ptr(), std::move(lambdas));
}

GradedPoly linfty_jacobi_residual(const PInfinityStructure& lambda, const std::vector<GradedPoly>& args) {
  const std::size_t n = args.size();
  const auto& dict = lambda.dict();
  std::vector<int> degs;
  for (const auto& a : args) {
    auto d = a.degree();
    if (!d && !a.is_zero()) throw DegreeError("linfty_jacobi_residual needs homogeneous arguments");
    degs.push_back(d.value_or(0));
  }
  auto factorial = [](std::size_t k) {
    Rational f(1);
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long>(i);
    return f;
  };
  auto jacobi = [&](const std::vector<GradedPoly>& b) {
    GradedPoly total(dict.a_base());
    for (std::size_t q = 0; q <= n; ++q) {
      std::vector<GradedPoly> inner(b.begin(), b.begin() + q);
      GradedPoly first = lambda.evaluate(q, inner);
      std::vector<GradedPoly> outer{first};
      outer.insert(outer.end(), b.begin() + q, b.end());
      GradedPoly term = lambda.evaluate(n - q + 1, outer);
      Rational c = 1 / (factorial(q) * factorial(n - q));
      if ((q * (n - q)) % 2) c = -c;
      total += term.scaled(c);
    }
    return total;
  };
  GradedPoly out(dict.a_base());
  std::vector<int> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<int>(i);
  Rational inv = 1 / factorial(n);
  do {
    int s = permutation_sign(sigma, degs) * permutation_parity_sign(sigma);
    std::vector<GradedPoly> moved(n, GradedPoly(dict.a_base()));
    for (std::size_t i = 0; i < n; ++i) moved[sigma[i]] = args[i];
    out += jacobi(moved).scaled(s > 0 ? inv : Rational(-inv));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace relform
