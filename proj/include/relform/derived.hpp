#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relform/fourier.hpp"

namespace relform {

// Coordinate submanifold {y = 0} of the ambient space, with y-adic truncation order.
class SubmanifoldSpec {
 public:
  SubmanifoldSpec(const Context& ambient, const std::vector<std::string>& transverse, unsigned truncation);

  const FourierDictionary& dict() const { return *dict_; }
  std::shared_ptr<const FourierDictionary> dict_ptr() const { return dict_; }
  const Context& ambient() const { return ambient_; }
  unsigned truncation() const { return truncation_; }
  const std::vector<std::string>& transverse() const { return transverse_; }

  // Re-expresses an ambient multivector on the dictionary's B side.
  MultiVector to_b_side(const MultiVector& pi) const;

 private:
  Context ambient_;
  std::vector<std::string> transverse_;
  unsigned truncation_;
  std::shared_ptr<const FourierDictionary> dict_;
};

inline unsigned default_truncation(unsigned eps_order, unsigned max_arity) { return eps_order + max_arity; }

MultiVector taylor_truncate(const MultiVector& pi, const SubmanifoldSpec& spec);

// Projection onto the abelian subalgebra: drop monomials containing y or xi.
MultiVector project_b(const FourierDictionary& dict, const MultiVector& z);
MultiVector project_a(const FourierDictionary& dict, const MultiVector& z);
bool in_abelian(const FourierDictionary& dict, const MultiVector& z);

// P[...[pi, a1], ..., an] on the B side; arguments must lie in the abelian subalgebra.
MultiVector derived_bracket(const MultiVector& pi, const SubmanifoldSpec& spec, const std::vector<MultiVector>& args);

// Embedding of A = k[x, th] into the A-side doubled context and back.
MultiVector lift_a(const FourierDictionary& dict, const GradedPoly& a);
GradedPoly lower_a(const FourierDictionary& dict, const MultiVector& z);

// Sign-twisted derived bracket on elements of A (multilinear in the components of each argument).
GradedPoly lambda_n(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t n, const std::vector<GradedPoly>& args);

bool is_coisotropic(const MultiVector& pi, const SubmanifoldSpec& spec);

class PInfinityStructure {
 public:
  PInfinityStructure(std::shared_ptr<const FourierDictionary> dict, std::vector<MultiVector> lambdas);

  const FourierDictionary& dict() const { return *dict_; }
  std::size_t max_arity() const { return lambdas_.size() - 1; }
  const MultiVector& lambda(std::size_t n) const { return lambdas_.at(n); }
  const std::vector<MultiVector>& lambdas() const { return lambdas_; }
  MultiVector total() const;

  GradedPoly evaluate(std::size_t n, const std::vector<GradedPoly>& args) const;

 private:
  std::shared_ptr<const FourierDictionary> dict_;
  std::vector<MultiVector> lambdas_;
};

// Components of the Fourier image by arity (number of xi and psi factors).
PInfinityStructure pinfinity_from_poisson(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t max_arity);
// Same structure rebuilt from lambda_n values on generator tuples.
PInfinityStructure pinfinity_from_brackets(const MultiVector& pi, const SubmanifoldSpec& spec, std::size_t max_arity);

GradedPoly linfty_jacobi_residual(const PInfinityStructure& lambda, const std::vector<GradedPoly>& args);

}  // namespace relform
