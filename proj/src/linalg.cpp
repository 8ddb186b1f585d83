#include "relform/linalg.hpp"

#include <limits>

namespace relform {

std::optional<std::vector<Rational>> solve_sparse(const std::vector<SparseVector>& columns, const SparseVector& rhs) {
  struct Row {
    SparseVector coeffs;
    Rational rhs;
  };
  std::map<std::size_t, Row> rows;
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [r, v] : columns[j])
      if (sgn(v) != 0) rows[r].coeffs[j] = v;
  for (const auto& [r, v] : rhs) rows[r].rhs = v;

  std::vector<Row> work;
  work.reserve(rows.size());
  for (auto& [r, row] : rows) work.push_back(std::move(row));

  std::vector<bool> used(work.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (column, row)
  for (std::size_t col = 0; col < columns.size(); ++col) {
    std::size_t best = work.size();
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (used[i] || !work[i].coeffs.count(col)) continue;
      if (work[i].coeffs.size() < best_len) {
        best = i;
        best_len = work[i].coeffs.size();
      }
    }
    if (best == work.size()) continue;
    used[best] = true;
    Row& p = work[best];
    Rational inv = 1 / p.coeffs.at(col);
    for (auto& [c, v] : p.coeffs) v *= inv;
    p.rhs *= inv;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i == best) continue;
      auto it = work[i].coeffs.find(col);
      if (it == work[i].coeffs.end()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : p.coeffs) {
        auto [jt, ins] = work[i].coeffs.try_emplace(c, 0);
        jt->second -= f * v;
        if (sgn(jt->second) == 0) work[i].coeffs.erase(jt);
      }
      work[i].rhs -= f * p.rhs;
    }
    pivots.emplace_back(col, best);
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    if (!used[i] && work[i].coeffs.empty() && sgn(work[i].rhs) != 0) return std::nullopt;
  std::vector<Rational> x(columns.size(), Rational(0));
  for (const auto& [col, row] : pivots) x[col] = work[row].rhs;
  return x;
}

}  // namespace relform
