#include "relform/multivector.hpp"

namespace relform {

int mv_degree(const MultiVector& g) {
  auto d = g.degree();
  if (!d) throw DegreeError("multivector is not homogeneous");
  return *d - 1;
}

bool check_poisson(const MultiVector& pi) {
  require_doubled(pi.context());
  if (!pi.is_zero() && mv_degree(pi) != 1) throw DegreeError("Poisson element must have shifted degree 1");
  return schouten(pi, pi).is_zero();
}

}  // namespace relform
