#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relform/hochschild.hpp"
#include "relform/multivector.hpp"
#include "relform/weight_expr.hpp"

namespace relform {

// Admissible graph: aerial vertices 0..n-1, ground vertices n..n+m-1.
struct KGraph {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> out_edges;

  int edge_count() const;
  bool is_ground(int v) const { return v >= n; }
  auto operator<=>(const KGraph&) const = default;
};

// Every graph with the given ordered out-degrees; lexicographic on target lists.
std::vector<KGraph> enumerate_graphs(int n, int m, const std::vector<int>& out_degrees);
// Only graphs whose target lists are increasing (one representative per edge set).
std::vector<KGraph> canonical_graphs(int n, int m, const std::vector<int>& out_degrees);
// Sorts every target list; returns the sign of the induced edge permutation.
int canonicalize(KGraph& g);
bool is_admissible(const KGraph& g);
// One line per aerial vertex, "v<i>: t1,t2" with ground targets written g<j>.
std::string to_string(const KGraph& g);

enum class WeightMethod { exact, quasi_monte_carlo };

struct GraphWeight {
  WeightMethod method = WeightMethod::exact;
  Rational exact;
  double value = 0;
  double err = 0;
  std::uint64_t samples = 0;
};

struct QmcOptions {
  std::uint64_t samples = 1'000'000;
  unsigned replicates = 16;
  std::uint64_t seed = 1;
};

std::string to_string(WeightMethod m);
GraphWeight weight(const KGraph& g, const QmcOptions& opts = {});
// Numeric estimate regardless of any exact shortcut.
GraphWeight qmc_weight(const KGraph& g, const QmcOptions& opts = {});

// Caches weights by canonical graph; numeric weights enter expressions as symbols.
class WeightRegistry {
 public:
  explicit WeightRegistry(QmcOptions opts = {}) : opts_(opts) {}

  WeightExpr expr(const KGraph& g);
  // Prescribes an exact value for a graph; expressions then carry the rational.
  void set_exact(const KGraph& g, const Rational& value);
  const GraphWeight& weight_of(std::uint32_t id) const { return weights_.at(id); }
  const KGraph& graph_of(std::uint32_t id) const { return graphs_.at(id); }
  std::size_t size() const { return graphs_.size(); }
  Estimate lookup(std::uint32_t id) const;
  Estimate evaluate(const WeightExpr& w) const;
  const QmcOptions& options() const { return opts_; }

 private:
  QmcOptions opts_;
  std::map<KGraph, Rational> exact_;
  std::map<KGraph, std::uint32_t> ids_;
  std::vector<KGraph> graphs_;
  std::vector<GraphWeight> weights_;
};

// epsilon-mu of the edge operators applied to gammas, as an operator on the ground slots.
MultiDiffOp graph_operator(const KGraph& g, const std::vector<MultiVector>& gammas);
GradedPoly graph_operator(const KGraph& g, const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs);

// U_n(gammas) over the base context; gammas may be inhomogeneous. Components of
// arity above max_arity are skipped.
MultiDiffOpT<WeightExpr> formality_map(const std::vector<MultiVector>& gammas, WeightRegistry& reg,
                                       int max_arity = -1);
WeightedPoly formality_map(const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs,
                           WeightRegistry& reg);

// LHS minus RHS of the quadratic formality relation for n = 1 or 2, as an operator.
MultiDiffOpT<WeightExpr> formality_residual(const std::vector<MultiVector>& gammas, WeightRegistry& reg);
WeightedPoly formality_residual(const std::vector<MultiVector>& gammas, const std::vector<GradedPoly>& fs,
                                WeightRegistry& reg);

// Largest |coefficient| / max(error, floor) over the terms; zero for an empty expression.
struct Deviation {
  double max_abs = 0;
  double max_sigma = 0;
  bool exact_zero = true;
};
Deviation deviation(const WeightedPoly& p, const WeightRegistry& reg, double floor = 1e-12);
Deviation deviation(const MultiDiffOpT<WeightExpr>& op, const WeightRegistry& reg, double floor = 1e-12);

}  // namespace relform
