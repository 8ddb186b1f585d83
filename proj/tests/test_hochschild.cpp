#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_inputs.hpp"
#include "relform/hochschild.hpp"
#include "relform/parser.hpp"

using namespace relform;
using relform::testing::op_degree;
using relform::testing::poly_degree;
using relform::testing::random_op;
using relform::testing::random_poly;
using relform::testing::Rng;

namespace {

Context base_even() { return make_context({{"x1", 0}, {"x2", 0}}); }
Context base_mixed() { return make_context({{"x1", 0}, {"t", 1}, {"s", -1}}); }

Monomial mono(const Context& c, const char* s) {
  if (std::string(s) == "1") return Monomial(c->size());
  return parse_poly(c, s).terms().begin()->first;
}

MultiDiffOp op1(const Context& c, const char* coeff, std::vector<const char*> slots) {
  std::vector<Monomial> ms;
  for (auto s : slots) ms.push_back(mono(c, s));
  return MultiDiffOp::term(parse_poly(c, coeff), ms);
}

std::vector<GradedPoly> random_args(const Context& c, std::size_t n, Rng& rng, std::vector<int>& degs) {
  std::vector<GradedPoly> args;
  degs.clear();
  for (std::size_t i = 0; i < n; ++i) {
    int d = rng.uniform(-1, 2);
    auto a = random_poly(c, 3, 2, rng, d);
    if (a.is_zero()) {
      a = GradedPoly::constant(c, Rational(1));
      d = 0;
    }
    args.push_back(a);
    degs.push_back(d);
  }
  return args;
}

// Direct evaluation of the three-block Hochschild formula.
GradedPoly b_oracle(const MultiDiffOp& phi, int pdeg, const std::vector<GradedPoly>& a, const std::vector<int>& degs) {
  std::size_t m = a.size() - 1;
  std::vector<GradedPoly> tail(a.begin() + 1, a.end());
  GradedPoly first = a[0] * apply_op(phi, tail);
  GradedPoly out = odd_degree(pdeg * degs[0]) ? -first : first;
  for (std::size_t j = 1; j <= m; ++j) {
    std::vector<GradedPoly> merged(a.begin(), a.begin() + (j - 1));
    merged.push_back(a[j - 1] * a[j]);
    merged.insert(merged.end(), a.begin() + j + 1, a.end());
    GradedPoly t = apply_op(phi, merged);
    out += (j % 2) ? -t : t;
  }
  std::vector<GradedPoly> head(a.begin(), a.begin() + m);
  GradedPoly last = apply_op(phi, head) * a[m];
  out += ((m + 1) % 2) ? -last : last;
  return out;
}

// phi . psi evaluated by substitution.
GradedPoly product_oracle(const MultiDiffOp& phi, std::size_t m1, const MultiDiffOp& psi, std::size_t m2, int qdeg,
                          const std::vector<GradedPoly>& a, const std::vector<int>& degs) {
  GradedPoly out(phi.context());
  long pre = (qdeg + static_cast<long>(m2) - 1) * (static_cast<long>(m1) - 1);
  for (std::size_t l = 0; l < m1; ++l) {
    int before = 0;
    for (std::size_t i = 0; i < l; ++i) before += degs[i];
    std::vector<GradedPoly> inner(a.begin() + l, a.begin() + l + m2);
    std::vector<GradedPoly> outer(a.begin(), a.begin() + l);
    outer.push_back(apply_op(psi, inner));
    outer.insert(outer.end(), a.begin() + l + m2, a.end());
    GradedPoly t = apply_op(phi, outer);
    long s = pre + static_cast<long>(l) * (static_cast<long>(m2) - 1) + qdeg * before;
    out += odd_degree(static_cast<int>(s % 2)) ? -t : t;
  }
  return out;
}

}  // namespace

TEST_CASE("apply_op examples") {
  auto c = base_even();
  auto mu = MultiDiffOp::product(c, 2);
  CHECK(apply_op(mu, {parse_poly(c, "x1"), parse_poly(c, "x2")}) == parse_poly(c, "x1*x2"));
  auto d12 = op1(c, "1", {"x1", "x2"});
  CHECK(apply_op(d12, {parse_poly(c, "x1"), parse_poly(c, "x2")}) == parse_poly(c, "1"));
  CHECK(apply_op(d12, {parse_poly(c, "x2"), parse_poly(c, "x1")}).is_zero());
  CHECK_THROWS_AS(apply_op(d12, {parse_poly(c, "x2")}), ArityMismatch);
}

TEST_CASE("hochschild_b examples") {
  auto c = base_mixed();
  CHECK(hochschild_b(MultiDiffOp::product(c, 1)) == MultiDiffOp::product(c, 2));
  CHECK(hochschild_b(MultiDiffOp::from_poly(parse_poly(c, "x1*t + s"))).is_zero());
  auto mu = MultiDiffOp::product(c, 2);
  CHECK(gerstenhaber_bracket(mu, mu).is_zero());
}

TEST_CASE("gerstenhaber product and bracket examples") {
  auto c = base_even();
  auto d1 = op1(c, "1", {"x1"});
  auto xd1 = op1(c, "x1", {"x1"});
  // a -> d1(x1 d1 a) = d1 a + x1 d1 d1 a
  CHECK(gerstenhaber_product(d1, xd1) == op1(c, "1", {"x1"}) + op1(c, "x1", {"x1^2"}));
  CHECK(gerstenhaber_bracket(d1, xd1) == d1);
  // substitution of a 0-cochain into the slots of a 2-cochain
  auto f = MultiDiffOp::from_poly(parse_poly(c, "x1^2"));
  auto d12 = op1(c, "1", {"x1", "x2"});
  CHECK(gerstenhaber_product(d12, f) == op1(c, "-2*x1", {"x2"}));
}

TEST_CASE("cup product examples") {
  auto c = base_even();
  auto d1 = op1(c, "1", {"x1"});
  auto d2 = op1(c, "1", {"x2"});
  CHECK(apply_op(cup(d1, d2), {parse_poly(c, "x1"), parse_poly(c, "x2")}) == parse_poly(c, "1"));
  auto f = MultiDiffOp::from_poly(parse_poly(c, "x1 + 2"));
  CHECK(cup(f, d1) == op1(c, "x1 + 2", {"x1"}));
}

TEST_CASE("hochschild b agrees with the three-block formula and the bracket") {
  auto c = base_mixed();
  Rng rng(3);
  int checked = 0;
  for (int it = 0; it < 150; ++it) {
    std::size_t m = static_cast<std::size_t>(rng.uniform(0, 2));
    int p = rng.uniform(-2, 2);
    auto phi = random_op(c, m, 2, 2, 3, rng, p);
    if (phi.is_zero()) continue;
    auto bphi = hochschild_b(phi);
    CHECK(bphi == hochschild_b_via_bracket(phi));
    CHECK(hochschild_b(bphi).is_zero());
    std::vector<int> degs;
    auto args = random_args(c, m + 1, rng, degs);
    CHECK(apply_op(bphi, args) == b_oracle(phi, p, args, degs));
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("gerstenhaber product matches substitution; bracket satisfies graded Jacobi") {
  auto c = base_mixed();
  Rng rng(9);
  for (int it = 0; it < 120; ++it) {
    std::size_t m1 = static_cast<std::size_t>(rng.uniform(0, 2)), m2 = static_cast<std::size_t>(rng.uniform(0, 2));
    int p1 = rng.uniform(-1, 1), p2 = rng.uniform(-1, 1);
    auto phi = random_op(c, m1, 2, 2, 2, rng, p1);
    auto psi = random_op(c, m2, 2, 2, 2, rng, p2);
    if (phi.is_zero() || psi.is_zero()) continue;
    std::size_t n = m1 == 0 ? 0 : m1 + m2 - 1;
    std::vector<int> degs;
    auto args = random_args(c, n, rng, degs);
    if (m1 > 0) CHECK(apply_op(gerstenhaber_product(phi, psi), args) == product_oracle(phi, m1, psi, m2, p2, args, degs));
    else CHECK(gerstenhaber_product(phi, psi).is_zero());

    // cup product: Koszul sign of the second factor passing the first block
    std::vector<int> cdegs;
    auto cargs = random_args(c, m1 + m2, rng, cdegs);
    std::vector<GradedPoly> left(cargs.begin(), cargs.begin() + m1), right(cargs.begin() + m1, cargs.end());
    int passed = 0;
    for (std::size_t i = 0; i < m1; ++i) passed += cdegs[i];
    GradedPoly expect = apply_op(phi, left) * apply_op(psi, right);
    CHECK(apply_op(cup(phi, psi), cargs) == (odd_degree(p2 * passed) ? -expect : expect));
  }
  for (int it = 0; it < 100; ++it) {
    std::vector<MultiDiffOp> ops;
    std::vector<long> shifted;
    for (int k = 0; k < 3; ++k) {
      std::size_t m = static_cast<std::size_t>(rng.uniform(0, 2));
      int p = rng.uniform(-1, 1);
      ops.push_back(random_op(c, m, 2, 2, 2, rng, p));
      shifted.push_back(p + static_cast<long>(m) - 1);
    }
    auto [a, b, g] = std::tie(ops[0], ops[1], ops[2]);
    auto sa = shifted[0], sb = shifted[1], sg = shifted[2];
    auto ab = gerstenhaber_bracket(a, b), ba = gerstenhaber_bracket(b, a);
    CHECK(ab == (odd_degree(static_cast<int>((sa * sb) % 2)) ? ba : -ba));
    auto j1 = gerstenhaber_bracket(gerstenhaber_bracket(a, b), g);
    auto j2 = gerstenhaber_bracket(gerstenhaber_bracket(b, g), a);
    auto j3 = gerstenhaber_bracket(gerstenhaber_bracket(g, a), b);
    auto sum = (odd_degree(static_cast<int>((sa * sg) % 2)) ? -j1 : j1) +
               (odd_degree(static_cast<int>((sb * sa) % 2)) ? -j2 : j2) +
               (odd_degree(static_cast<int>((sg * sb) % 2)) ? -j3 : j3);
    CHECK(sum.is_zero());
    auto cup_assoc = cup(cup(a, b), g) - cup(a, cup(b, g));
    CHECK(cup_assoc.is_zero());
  }
}

TEST_CASE("operator printing") {
  auto c = base_even();
  CHECK(to_string(op1(c, "x1", {"x1^2", "1"}) + op1(c, "-1/2", {"x2", "x1"})) ==
        "-1/2 * D[x2|x1] + x1 * D[x1,x1|1]");
  CHECK(to_string(MultiDiffOp::from_poly(parse_poly(c, "x2"))) == "x2 * D[]");
}
