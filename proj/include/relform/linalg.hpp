#pragma once

#include <map>
#include <optional>
#include <vector>

#include "relform/graded_core.hpp"

namespace relform {

using SparseVector = std::map<std::size_t, Rational>;

// Exact solution of sum_j x_j * columns[j] = rhs (free variables set to 0).
std::optional<std::vector<Rational>> solve_sparse(const std::vector<SparseVector>& columns, const SparseVector& rhs);

}  // namespace relform
