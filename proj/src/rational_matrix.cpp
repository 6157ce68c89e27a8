#include "expfam/rational_matrix.hpp"

#include <algorithm>

namespace expfam {

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows) {
  if (rows.empty()) return RatMatrix(0, 0);
  RatMatrix m(int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < m.rows_; ++i) {
    if (int(rows[i].size()) != m.cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    }
    m.set_row(i, rows[i]);
  }
  return m;
}

RatVec RatMatrix::row(int i) const {
  RatVec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

RatVec RatMatrix::col(int j) const {
  RatVec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

void RatMatrix::set_row(int i, const RatVec& v) {
  for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
}

void RatMatrix::append_rows(const RatMatrix& other) {
  if (rows_ == 0 && cols_ == 0) cols_ = other.cols_;
  if (other.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "append_rows: column mismatch");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

void RatMatrix::append_row(const RatVec& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = int(v.size());
  if (int(v.size()) != cols_) throw Error(ErrorCode::DimensionMismatch, "append_row: size mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  rows_ += 1;
}

RatMatrix RatMatrix::select_columns(const std::vector<int>& idx) const {
  RatMatrix m(rows_, int(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < int(idx.size()); ++j) m.at(i, j) = at(i, idx[j]);
  return m;
}

std::vector<int> RatMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int p = -1;
    for (int i = r; i < rows_; ++i) {
      if (sgn(at(i, c)) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
    }
    Rat inv = at(r, c);
    for (int j = c; j < cols_; ++j) at(r, j) /= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || sgn(at(i, c)) == 0) continue;
      Rat f = at(i, c);
      for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int RatMatrix::rank() const {
  RatMatrix m = *this;
  return int(m.rref().size());
}

std::vector<RatVec> RatMatrix::kernel_basis() const {
  RatMatrix m = *this;
  std::vector<int> pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (int f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols_, Rat(0));
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(int(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVec> RatMatrix::solve_unique(const RatVec& b) const {
  if (int(b.size()) != rows_) throw Error(ErrorCode::DimensionMismatch, "solve_unique: rhs size");
  RatMatrix aug(rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  std::vector<int> pivots = aug.rref();
  // inconsistent if the last column is a pivot
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
  if (int(pivots.size()) != cols_) return std::nullopt;  // underdetermined
  RatVec x(cols_);
  for (int r = 0; r < cols_; ++r) x[r] = aug.at(r, cols_);
  return x;
}

int RatMatrix::rank_of_columns(const std::vector<int>& idx) const {
  return select_columns(idx).rank();
}

RatMatrix RatMatrix::row_space_basis() const {
  RatMatrix m = *this;
  std::vector<int> pivots = m.rref();
  RatMatrix basis(int(pivots.size()), cols_);
  for (int i = 0; i < int(pivots.size()); ++i)
    for (int j = 0; j < cols_; ++j) basis.at(i, j) = m.at(i, j);
  return basis;
}

RatVec RatMatrix::multiply(const RatVec& v) const {
  if (int(v.size()) != cols_) throw Error(ErrorCode::DimensionMismatch, "multiply: size mismatch");
  RatVec out(rows_, Rat(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (sgn(at(i, j)) != 0 && sgn(v[j]) != 0) out[i] += at(i, j) * v[j];
  return out;
}

bool same_row_span(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.cols()) return false;
  int ra = a.rank();
  int rb = b.rank();
  if (ra != rb) return false;
  RatMatrix stacked = a;
  stacked.append_rows(b);
  return stacked.rank() == ra;
}

RatVec primitive_normalize(const RatVec& v) {
  mpz_class lcm_den(1), gcd_num(0);
  for (const Rat& q : v) {
    if (sgn(q) == 0) continue;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
  }
  RatVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] * Rat(lcm_den);
  for (const Rat& q : w) {
    if (sgn(q) == 0) continue;
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), q.get_num().get_mpz_t());
  }
  if (gcd_num == 0) return w;  // zero vector
  int lead = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) != 0) {
      lead = sgn(w[i]);
      break;
    }
  }
  Rat scale = Rat(gcd_num) * (lead < 0 ? -1 : 1);
  for (Rat& q : w) q /= scale;
  return w;
}

}  // namespace expfam
