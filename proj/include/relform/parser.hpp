#pragma once

#include <string_view>

#include "relform/graded_core.hpp"

namespace relform {

struct ParseError : AlgebraError {
  using AlgebraError::AlgebraError;
};

// Grammar: sums and differences of products of rationals (p/q), declared
// variable names and parenthesised subexpressions; x^k with integer k >= 0.
GradedPoly parse_poly(const Context& ctx, std::string_view text);

}  // namespace relform
