#include "coopfuse/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coopfuse {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("cost matrix size mismatch");
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

namespace {

// Requires rows <= cols. Potentials u (rows) and v (cols), 1-based with a
// virtual column 0, as in the classic formulation.
std::vector<long> hungarian_wide(const CostMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<long> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<long>(j - 1);
  }
  return row_to_col;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& cost) {
  Assignment out;
  out.row_to_col.assign(cost.rows(), -1);
  if (cost.empty()) return out;
  for (double c : cost.values()) {
    if (!std::isfinite(c)) throw std::invalid_argument("cost matrix has non-finite entry");
  }

  if (cost.rows() <= cost.cols()) {
    out.row_to_col = hungarian_wide(cost);
  } else {
    const std::vector<long> col_to_row = hungarian_wide(cost.transposed());
    for (std::size_t c = 0; c < col_to_row.size(); ++c) {
      if (col_to_row[c] >= 0) out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<long>(c);
    }
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r) {
    if (out.row_to_col[r] >= 0) out.total_cost += cost(r, static_cast<std::size_t>(out.row_to_col[r]));
  }
  return out;
}

}  // namespace coopfuse
