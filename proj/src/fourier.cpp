#include "relform/fourier.hpp"

namespace relform {

FourierDictionary::FourierDictionary(std::vector<Variable> base_vars, std::vector<std::string> fiber_names)
    : nbase_(base_vars.size()), nfiber_(fiber_names.size()) {
  std::vector<Variable> a = base_vars, b = base_vars;
  for (const auto& y : fiber_names) {
    a.push_back({"th_" + y, 1});
    b.push_back({y, 0});
  }
  a_base_ = make_context(std::move(a));
  b_base_ = make_context(std::move(b));
  a_side_ = make_doubled(a_base_);
  b_side_ = make_doubled(b_base_);
}

std::pair<std::size_t, int> FourierDictionary::forward(std::size_t v) const {
  if (v < nbase_) return {b_x(v), 1};
  if (v < nbase_ + nfiber_) return {b_eta(v - nbase_), -1};
  if (v < 2 * nbase_ + nfiber_) return {b_xi(v - nbase_ - nfiber_), 1};
  if (v < 2 * (nbase_ + nfiber_)) return {b_y(v - 2 * nbase_ - nfiber_), 1};
  throw UnknownVariable("#" + std::to_string(v));
}

std::pair<std::size_t, int> FourierDictionary::backward(std::size_t v) const {
  if (v < nbase_) return {a_x(v), 1};
  if (v < nbase_ + nfiber_) return {a_psi(v - nbase_), 1};
  if (v < 2 * nbase_ + nfiber_) return {a_xi(v - nbase_ - nfiber_), 1};
  if (v < 2 * (nbase_ + nfiber_)) return {a_theta(v - 2 * nbase_ - nfiber_), -1};
  throw UnknownVariable("#" + std::to_string(v));
}

MultiVector fourier_poisson_to_lambda(const FourierDictionary& dict, const MultiVector& pi, unsigned max_order) {
  require_same(pi.context(), dict.b_side());
  if (!pi.is_zero() && mv_degree(pi) != 1) throw DegreeError("expected a bivector");
  return fourier_inverse(dict, truncate_fibre(dict, pi, max_order));
}

}  // namespace relform
