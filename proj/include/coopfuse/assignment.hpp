#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coopfuse {

// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> values() const { return data_; }

  CostMatrix transposed() const;

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  // row_to_col[r] = assigned column, or -1. Exactly min(rows, cols) rows are
  // assigned.
  std::vector<long> row_to_col;
  double total_cost = 0.0;
};

// Minimum-cost maximum-cardinality assignment (shortest augmenting path
// Hungarian, O(n^2 m)). Rows are processed in ascending order and columns are
// scanned ascending with strict comparisons, so results are deterministic.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace coopfuse
