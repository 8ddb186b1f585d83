#include "relform/kontsevich.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>

namespace relform {

int KGraph::edge_count() const {
  int k = 0;
  for (const auto& t : out_edges) k += static_cast<int>(t.size());
  return k;
}

bool is_admissible(const KGraph& g) {
  if (static_cast<int>(g.out_edges.size()) != g.n) return false;
  for (int i = 0; i < g.n; ++i) {
    const auto& t = g.out_edges[i];
    for (std::size_t a = 0; a < t.size(); ++a) {
      if (t[a] == i || t[a] < 0 || t[a] >= g.n + g.m) return false;
      for (std::size_t b = 0; b < a; ++b)
        if (t[a] == t[b]) return false;
    }
  }
  return true;
}

namespace {

void enumerate_rec(int n, int m, const std::vector<int>& p, bool sorted_only, KGraph& cur, std::size_t i,
                   std::vector<KGraph>& out) {
  if (i == static_cast<std::size_t>(n)) {
    out.push_back(cur);
    return;
  }
  const int total = n + m;
  std::vector<int> others;
  for (int v = 0; v < total; ++v)
    if (v != static_cast<int>(i)) others.push_back(v);
  const int k = p[i];
  if (k > static_cast<int>(others.size())) return;
  // choose k of the others, then every ordering unless sorted_only
  std::vector<bool> mask(others.size(), false);
  std::fill(mask.begin(), mask.begin() + k, true);
  std::vector<std::vector<int>> choices;
  do {
    std::vector<int> pick;
    for (std::size_t a = 0; a < others.size(); ++a)
      if (mask[a]) pick.push_back(others[a]);
    if (sorted_only) {
      choices.push_back(pick);
    } else {
      do choices.push_back(pick);
      while (std::next_permutation(pick.begin(), pick.end()));
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  std::sort(choices.begin(), choices.end());
  for (auto& c : choices) {
    cur.out_edges[i] = c;
    enumerate_rec(n, m, p, sorted_only, cur, i + 1, out);
  }
}

std::vector<KGraph> enumerate_impl(int n, int m, const std::vector<int>& p, bool sorted_only) {
  if (n < 0 || m < 0 || static_cast<int>(p.size()) != n)
    throw ArityMismatch("out-degree list must have one entry per aerial vertex");
  std::vector<KGraph> out;
  KGraph cur{n, m, std::vector<std::vector<int>>(n)};
  enumerate_rec(n, m, p, sorted_only, cur, 0, out);
  return out;
}

}  // namespace

std::vector<KGraph> enumerate_graphs(int n, int m, const std::vector<int>& out_degrees) {
  return enumerate_impl(n, m, out_degrees, false);
}

std::vector<KGraph> canonical_graphs(int n, int m, const std::vector<int>& out_degrees) {
  return enumerate_impl(n, m, out_degrees, true);
}

int canonicalize(KGraph& g) {
  int s = 1;
  for (auto& t : g.out_edges) {
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b)
        if (t[a] > t[b]) s = -s;
    std::sort(t.begin(), t.end());
  }
  return s;
}

std::string to_string(const KGraph& g) {
  std::string out;
  for (int i = 0; i < g.n; ++i) {
    out += "v" + std::to_string(i + 1) + ":";
    for (std::size_t a = 0; a < g.out_edges[i].size(); ++a) {
      int t = g.out_edges[i][a];
      out += (a ? "," : " ");
      out += g.is_ground(t) ? "g" + std::to_string(t - g.n + 1) : "v" + std::to_string(t + 1);
    }
    if (i + 1 < g.n) out += "\n";
  }
  return out;
}

std::string to_string(WeightMethod m) { return m == WeightMethod::exact ? "exact" : "qmc"; }

namespace {

bool wrong_dimension(const KGraph& g) { return g.edge_count() != 2 * g.n + g.m - 2; }

// A configuration coordinate that no edge depends on makes the top form vanish identically.
bool has_free_coordinate(const KGraph& g) {
  std::vector<bool> touched(g.n + g.m, false);
  touched[0] = true;
  for (int i = 0; i < g.n; ++i)
    for (int t : g.out_edges[i]) touched[i] = touched[t] = true;
  return std::find(touched.begin(), touched.end(), false) != touched.end();
}

Rational factorial(int m) {
  Rational f(1);
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

GraphWeight exact_weight(const Rational& v) {
  GraphWeight w;
  w.method = WeightMethod::exact;
  w.exact = v;
  w.value = v.get_d();
  return w;
}

using Complex = std::complex<double>;

struct Sampler {
  const KGraph& g;
  int dims;
  std::vector<Complex> z;
  std::vector<double> x;
  Eigen::MatrixXd jac;

  explicit Sampler(const KGraph& graph)
      : g(graph), dims(2 * (graph.n - 1) + graph.m), z(graph.n), x(graph.m), jac(dims, dims) {}

  int column_re(int v) const { return g.is_ground(v) ? 2 * (g.n - 1) + (v - g.n) : 2 * (v - 1); }

  // Integrand at a point of the unit cube, including all Jacobians.
  double operator()(const std::vector<double>& u) {
    constexpr double pi = std::numbers::pi;
    double factor = 1;
    z[0] = Complex(0, 1);
    for (int j = 1; j < g.n; ++j) {
      double r = u[2 * (j - 1)], a = u[2 * (j - 1) + 1];
      if (r <= 0 || r >= 1) return 0;
      Complex zeta = std::polar(r, 2 * pi * a);
      Complex den = Complex(1) - zeta;
      z[j] = Complex(0, 1) * (Complex(1) + zeta) / den;
      factor *= 2 * pi * r * 4 / std::pow(std::abs(den), 4);
    }
    std::vector<double> raw(g.m);
    for (int k = 0; k < g.m; ++k) {
      double t = u[2 * (g.n - 1) + k];
      if (t <= 0 || t >= 1) return 0;
      raw[k] = std::tan(pi * (t - 0.5));
      factor *= pi * (1 + raw[k] * raw[k]);
    }
    // ground vertex j sits at the j-th smallest sampled value
    std::vector<int> idx(g.m);
    for (int k = 0; k < g.m; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return raw[a] < raw[b]; });
    for (int k = 0; k < g.m; ++k) x[k] = raw[idx[k]];
    jac.setZero();
    int row = 0;
    for (int s = 0; s < g.n; ++s)
      for (int t : g.out_edges[s]) {
        Complex a = z[s];
        Complex b = g.is_ground(t) ? Complex(x[t - g.n], 0) : z[t];
        Complex p = Complex(1) / (a - b), q = Complex(1) / (std::conj(a) - b);
        if (s > 0) {
          jac(row, column_re(s)) += p.imag() - q.imag();
          jac(row, column_re(s) + 1) += p.real() + q.real();
        }
        if (g.is_ground(t)) {
          jac(row, column_re(t)) += -p.imag() + q.imag();
        } else if (t > 0) {
          jac(row, column_re(t)) += -p.imag() + q.imag();
          jac(row, column_re(t) + 1) += -p.real() + q.real();
        }
        ++row;
      }
    return jac.determinant() * factor;
  }
};

}  // namespace

GraphWeight weight(const KGraph& g, const QmcOptions& opts) {
  if (!is_admissible(g)) throw AlgebraError("graph is not admissible");
  if (2 * g.n + g.m < 2 || wrong_dimension(g) || has_free_coordinate(g)) return exact_weight(Rational(0));
  if (g.n == 1) {
    // the angles of the ground points increase with their position
    KGraph c = g;
    int s = canonicalize(c);
    return exact_weight(Rational(s) / factorial(g.m));
  }
  return qmc_weight(g, opts);
}

GraphWeight qmc_weight(const KGraph& g, const QmcOptions& opts) {
  Sampler f(g);
  const int dims = f.dims;
  const unsigned reps = std::max(2u, opts.replicates);
  const std::uint64_t per = std::max<std::uint64_t>(1, opts.samples / reps);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(dims), u(dims), means;
  const double scale = 1.0 / (static_cast<double>(boost::random::sobol::max()) + 1.0);
  const double norm = std::pow(2 * std::numbers::pi, -dims) / factorial(g.m).get_d();
  for (unsigned r = 0; r < reps; ++r) {
    for (auto& s : shift) s = unif(rng);
    boost::random::sobol eng(static_cast<std::size_t>(dims));
    double sum = 0;
    for (std::uint64_t k = 0; k < per; ++k) {
      for (int d = 0; d < dims; ++d) {
        double v = static_cast<double>(eng()) * scale + shift[d];
        u[d] = v >= 1 ? v - 1 : v;
      }
      sum += f(u);
    }
    means.push_back(sum / static_cast<double>(per) * norm);
  }
  double mean = 0;
  for (double v : means) mean += v;
  mean /= reps;
  double var = 0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= (reps - 1);
  GraphWeight w;
  w.method = WeightMethod::quasi_monte_carlo;
  w.value = mean;
  w.err = std::sqrt(var / reps);
  w.samples = per * reps;
  return w;
}

WeightExpr WeightRegistry::expr(const KGraph& g) {
  KGraph c = g;
  int s = canonicalize(c);
  if (2 * c.n + c.m < 2 || wrong_dimension(c) || has_free_coordinate(c)) return WeightExpr();
  if (c.n == 1) return WeightExpr(Rational(s) * weight(c, opts_).exact);
  if (auto e = exact_.find(c); e != exact_.end()) return WeightExpr(Rational(s) * e->second);
  auto it = ids_.find(c);
  std::uint32_t id;
  if (it == ids_.end()) {
    id = static_cast<std::uint32_t>(graphs_.size());
    ids_.emplace(c, id);
    graphs_.push_back(c);
    weights_.push_back(weight(c, opts_));
  } else {
    id = it->second;
  }
  return WeightExpr::symbol(id) * Rational(s);
}

void WeightRegistry::set_exact(const KGraph& g, const Rational& value) {
  KGraph c = g;
  int s = canonicalize(c);
  exact_[c] = Rational(s) * value;
}

Estimate WeightRegistry::lookup(std::uint32_t id) const {
  const auto& w = weights_.at(id);
  return {w.value, w.err};
}

Estimate WeightRegistry::evaluate(const WeightExpr& w) const {
  return w.evaluate([this](std::uint32_t id) { return lookup(id); });
}

namespace {

struct SlotState {
  long long coef;
  std::vector<Monomial> aerial;
  std::vector<Monomial> ground;
};

struct Edge {
  int source;
  int target;
};

std::vector<Edge> edge_list(const KGraph& g) {
  std::vector<Edge> e;
  for (int i = 0; i < g.n; ++i)
    for (int t : g.out_edges[i]) e.push_back({i, t});
  return e;
}

// epsilon-mu of prod tau_e applied to one tuple of monomials; the rightmost edge acts first.
void graph_terms(const KGraph& g, const GradedContext& doubled, const std::vector<Monomial>& monos,
                 const Rational& c, KeyTerms& out) {
  const GradedContext& base = *doubled.base();
  const std::size_t d = doubled.pair_count();
  const auto edges = edge_list(g);
  auto slot_odd = [&](const SlotState& s, int v) {
    return v < g.n ? monomial_odd(doubled, s.aerial[v]) : monomial_odd(base, s.ground[v - g.n]);
  };
  auto rec = [&](auto&& self, SlotState s, int e) -> void {
    if (e < 0) {
      Monomial prod(doubled.size()), next;
      int sign = 1;
      for (const auto& a : s.aerial) {
        for (std::size_t v = d; v < doubled.size(); ++v)
          if (a.exp[v]) return;
        int f = monomial_mul(doubled, prod, a, next);
        if (f == 0) return;
        sign *= f;
        prod = next;
      }
      Monomial coeff(d);
      for (std::size_t v = 0; v < d; ++v) coeff.exp[v] = prod.exp[v];
      out.emplace_back(c * Rational(static_cast<long>(sign * s.coef)), OpKey{coeff, s.ground});
      return;
    }
    const int i = edges[e].source, t = edges[e].target;
    for (std::size_t alpha = 0; alpha < d; ++alpha) {
      const bool eps = base.odd(alpha);
      bool flip = eps;
      // d_theta is odd exactly when x_alpha is even; the slot degrees before this edge act
      for (int k = 0; k < i; ++k)
        if (!eps && slot_odd(s, k)) flip = !flip;
      for (int k = 0; k < t; ++k)
        if (eps && slot_odd(s, k)) flip = !flip;
      SlotState nxt = s;
      Monomial tmp;
      long long f = monomial_left_partial(doubled, s.aerial[i], doubled.conjugate(alpha), tmp);
      if (f == 0) continue;
      nxt.aerial[i] = tmp;
      if (t < g.n) {
        long long h = monomial_left_partial(doubled, s.aerial[t], alpha, tmp);
        if (h == 0) continue;
        f *= h;
        nxt.aerial[t] = tmp;
      } else {
        Monomial unit(d);
        unit.exp[alpha] = 1;
        int h = monomial_mul(base, unit, s.ground[t - g.n], tmp);
        if (h == 0) continue;
        f *= h;
        nxt.ground[t - g.n] = tmp;
      }
      nxt.coef = flip ? -s.coef * f : s.coef * f;
      self(self, std::move(nxt), e - 1);
    }
  };
  SlotState start{1, monos, std::vector<Monomial>(g.m, Monomial(d))};
  rec(rec, std::move(start), static_cast<int>(edges.size()) - 1);
}

unsigned theta_arity(const GradedContext& doubled, const Monomial& m) {
  unsigned a = 0;
  for (std::size_t v = doubled.pair_count(); v < doubled.size(); ++v) a += m.exp[v];
  return a;
}

const Context& common_context(const std::vector<MultiVector>& gammas) {
  if (gammas.empty()) throw ArityMismatch("at least one multivector is required");
  const Context& c = gammas.front().context();
  require_doubled(c);
  for (const auto& g : gammas) require_same(c, g.context());
  return c;
}

void check_arities(const KGraph& g, const std::vector<MultiVector>& gammas) {
  if (static_cast<int>(gammas.size()) != g.n) throw ArityMismatch("one multivector per aerial vertex is required");
}

// Graph operator summed over monomial tuples; each tuple is weighted by sign(tuple).
template <class SignFn>
MultiDiffOp graph_operator_signed(const KGraph& g, const std::vector<MultiVector>& gammas, SignFn&& sign) {
  check_arities(g, gammas);
  const Context& c = common_context(gammas);
  MultiDiffOp op(c->base());
  std::vector<std::vector<std::pair<Monomial, Rational>>> lists;
  for (int i = 0; i < g.n; ++i) {
    lists.emplace_back();
    for (const auto& [m, r] : gammas[i].terms())
      if (theta_arity(*c, m) == g.out_edges[i].size()) lists.back().emplace_back(m, r);
  }
  std::vector<Monomial> pick(g.n);
  KeyTerms terms;
  auto rec = [&](auto&& self, int i, const Rational& acc) -> void {
    if (i == g.n) {
      Rational s = acc * sign(pick);
      graph_terms(g, *c, pick, s, terms);
      return;
    }
    for (const auto& [m, r] : lists[i]) {
      pick[i] = m;
      self(self, i + 1, acc * r);
    }
  };
  rec(rec, 0, Rational(1));
  op.add_terms(terms, Rational(1));
  return op;
}

}  // namespace

MultiDiffOp graph_operator(const KGraph& g, const std::vector<MultiVector>& gammas) {
  return graph_operator_signed(g, gammas, [](const std::vector<Monomial>&) { return 1; });
}

GradedPoly graph_operator(const KGraph& g, const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs) {
  if (static_cast<int>(fs.size()) != g.m) throw ArityMismatch("one function per ground vertex is required");
  auto op = graph_operator(g, gammas);
  if (op.is_zero()) return GradedPoly(common_context(gammas)->base());
  return apply_op(op, fs);
}

MultiDiffOpT<WeightExpr> formality_map(const std::vector<MultiVector>& gammas, WeightRegistry& reg, int max_arity) {
  const Context& c = common_context(gammas);
  const int n = static_cast<int>(gammas.size());
  MultiDiffOpT<WeightExpr> out(c->base());
  std::vector<std::set<unsigned>> arities(n);
  for (int i = 0; i < n; ++i)
    for (const auto& [m, r] : gammas[i].terms()) arities[i].insert(theta_arity(*c, m));
  std::vector<int> p(n);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      int sum = 0;
      for (int v : p) sum += v;
      const int m = sum - 2 * n + 2;
      if (m < 0 || (max_arity >= 0 && m > max_arity)) return;
      const int k = sum;
      for (const auto& g : canonical_graphs(n, m, p)) {
        WeightExpr w = reg.expr(g);
        if (w.is_zero()) continue;
        auto sign = [&](const std::vector<Monomial>& monos) {
          int deg = 0;
          for (const auto& mo : monos) deg += monomial_degree(*c, mo);
          return odd_degree((deg - 1) * m + k * (k - 1) / 2) ? -1 : 1;
        };
        auto op = graph_operator_signed(g, gammas, sign);
        for (const auto& [key, r] : op.terms()) out.add_term(key, w * r);
      }
      return;
    }
    for (unsigned a : arities[i]) {
      p[i] = static_cast<int>(a);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

WeightedPoly formality_map(const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs,
                           WeightRegistry& reg) {
  auto op = formality_map(gammas, reg, static_cast<int>(fs.size()));
  std::vector<WeightedPoly> args;
  for (const auto& f : fs) args.push_back(to_weighted(f));
  MultiDiffOpT<WeightExpr> part = op.arity_component(fs.size());
  if (part.is_zero()) return WeightedPoly(common_context(gammas)->base());
  return apply_op(part, args);
}

namespace {

// Q2 on shifted Hochschild cochains: (-1)^{|phi|} [phi, psi] with |phi| the shifted degree.
MultiDiffOpT<WeightExpr> q2_cochains(const MultiDiffOpT<WeightExpr>& phi, const MultiDiffOpT<WeightExpr>& psi) {
  MultiDiffOpT<WeightExpr> out(phi.context());
  for (const auto& [d, comp] : phi.components()) {
    auto br = gerstenhaber_bracket(comp, psi);
    if (odd_degree(static_cast<int>(d.first) + d.second)) out -= br;
    else out += br;
  }
  return out;
}

MultiVector homogeneous_part(const MultiVector& g, int degree) {
  MultiVector out(g.context());
  for (const auto& [m, r] : g.terms())
    if (monomial_degree(*g.context(), m) == degree) out.add_term(m, r);
  return out;
}

std::set<int> degrees_of(const MultiVector& g) {
  std::set<int> s;
  for (const auto& [m, r] : g.terms()) s.insert(monomial_degree(*g.context(), m));
  return s;
}

}  // namespace

MultiDiffOpT<WeightExpr> formality_residual(const std::vector<MultiVector>& gammas, WeightRegistry& reg) {
  const Context& c = common_context(gammas);
  const auto mu = MultiDiffOpT<WeightExpr>::product(c->base(), 2);
  if (gammas.size() == 1) {
    auto u1 = formality_map(gammas, reg);
    return q2_cochains(mu, u1) + q2_cochains(u1, mu);
  }
  if (gammas.size() != 2) throw ArityMismatch("formality residual is implemented for one or two arguments");
  MultiDiffOpT<WeightExpr> out(c->base());
  for (int d1 : degrees_of(gammas[0]))
    for (int d2 : degrees_of(gammas[1])) {
      MultiVector g1 = homogeneous_part(gammas[0], d1), g2 = homogeneous_part(gammas[1], d2);
      auto u2 = formality_map({g1, g2}, reg);
      auto a = formality_map({g1}, reg), b = formality_map({g2}, reg);
      out += q2_cochains(mu, u2) + q2_cochains(u2, mu) + q2_cochains(a, b);
      auto swapped = q2_cochains(b, a);
      if (odd_degree(d1 * d2)) out -= swapped;
      else out += swapped;
      // Q2 on multivector fields, taken over both orderings like the shuffles on the left
      MultiVector br = schouten(g1, g2);
      if (odd_degree(d1)) br = -br;
      if (!br.is_zero()) out -= formality_map({br}, reg).scaled(WeightExpr(2));
    }
  return out;
}

WeightedPoly formality_residual(const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs,
                                WeightRegistry& reg) {
  auto op = formality_residual(gammas, reg).arity_component(fs.size());
  if (op.is_zero()) return WeightedPoly(common_context(gammas)->base());
  std::vector<WeightedPoly> args;
  for (const auto& f : fs) args.push_back(to_weighted(f));
  return apply_op(op, args);
}

namespace {

template <class Range>
Deviation deviation_of(const Range& coeffs, const WeightRegistry& reg, double floor) {
  Deviation dev;
  for (const WeightExpr& w : coeffs) {
    if (w.is_zero()) continue;
    dev.exact_zero = false;
    Estimate e = reg.evaluate(w);
    dev.max_abs = std::max(dev.max_abs, std::abs(e.value));
    dev.max_sigma = std::max(dev.max_sigma, std::abs(e.value) / std::max(e.err, floor));
  }
  return dev;
}

}  // namespace

Deviation deviation(const WeightedPoly& p, const WeightRegistry& reg, double floor) {
  std::vector<WeightExpr> cs;
  for (const auto& [m, w] : p.terms()) cs.push_back(w);
  return deviation_of(cs, reg, floor);
}

Deviation deviation(const MultiDiffOpT<WeightExpr>& op, const WeightRegistry& reg, double floor) {
  std::vector<WeightExpr> cs;
  for (const auto& [k, w] : op.terms()) cs.push_back(w);
  return deviation_of(cs, reg, floor);
}

}  // namespace relform
