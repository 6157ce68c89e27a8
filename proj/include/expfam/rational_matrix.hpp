#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "expfam/rational.hpp"

namespace expfam {

/// Dense matrix of exact rationals with Gauss-Jordan elimination.
/// Row-major storage; all reductions are deterministic (leftmost pivot,
/// topmost row), so kernel bases are reproducible across runs.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, Rat(0)) {}

  static RatMatrix from_rows(const std::vector<RatVec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  RatVec row(int i) const;
  RatVec col(int j) const;
  void set_row(int i, const RatVec& v);

  /// Append `other` below this matrix (column counts must agree).
  void append_rows(const RatMatrix& other);
  void append_row(const RatVec& v);

  RatMatrix select_columns(const std::vector<int>& idx) const;

  /// In-place reduced row echelon form. Returns pivot column indices.
  std::vector<int> rref();

  int rank() const;

  /// Basis of {v : M v = 0}, from the RREF free columns. Deterministic.
  std::vector<RatVec> kernel_basis() const;

  /// Unique solution of M x = b when it exists and is unique.
  std::optional<RatVec> solve_unique(const RatVec& b) const;

  /// Rank of the submatrix made of the given columns.
  int rank_of_columns(const std::vector<int>& idx) const;

  /// Basis of the row space (subset of rows in echelon order).
  RatMatrix row_space_basis() const;

  RatVec multiply(const RatVec& v) const;

  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_, cols_;
  std::vector<Rat> data_;
};

/// True iff the two row sets span the same subspace of Q^n.
bool same_row_span(const RatMatrix& a, const RatMatrix& b);

/// Scale a rational vector to primitive integer form with the first nonzero
/// entry positive (the canonical representative used for circuit vectors).
RatVec primitive_normalize(const RatVec& v);

}  // namespace expfam
