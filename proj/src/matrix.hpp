#pragma once

#include "field.hpp"

namespace scalex {

/// Dense exact matrix over a field in the tower. Row-major storage;
/// matrices act on column vectors (A: K^cols -> K^rows).
class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr F, int rows, int cols)
      : F_(std::move(F)), rows_(rows), cols_(cols), e_((size_t)rows * cols, F_->zero()) {}

  static Mat identity(const FieldPtr& F, int n);

  const FieldPtr& field() const { return F_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Scalar& at(int i, int j) const { return e_[(size_t)i * cols_ + j]; }
  Scalar& at(int i, int j) { return e_[(size_t)i * cols_ + j]; }

  bool is_zero() const;
  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator-() const;
  Mat operator*(const Mat& o) const;  // composition: this ∘ o
  Mat scaled(const Scalar& c) const;
  Mat transposed() const;

  static Mat hstack(const Mat& a, const Mat& b);
  static Mat vstack(const Mat& a, const Mat& b);
  Mat column(int j) const;
  Mat submatrix(int i0, int j0, int r, int c) const;

 private:
  FieldPtr F_;
  int rows_ = 0, cols_ = 0;
  std::vector<Scalar> e_;
};

/// Reduced row echelon form; returns pivot column indices (deterministic:
/// first nonzero pivot scan in row order).
Mat rref(Mat a, std::vector<int>* pivot_cols = nullptr);
int rank(const Mat& a);
/// Basis of the right kernel as matrix columns, in the standard RREF order
/// (free columns ascending).
Mat kernel_basis(const Mat& a);
/// Solves a x = b (b one or more columns). Empty optional when inconsistent.
std::optional<Mat> solve(const Mat& a, const Mat& b);
/// Like solve for a single column; on failure also produces y with
/// y^T a = 0 and y^T b != 0 (an exact inconsistency certificate).
struct SolveOutcome {
  std::optional<Mat> solution;
  std::optional<Mat> certificate;  // column vector y
};
SolveOutcome solve_certified(const Mat& a, const Mat& b);
std::optional<Mat> inverse(const Mat& a);

/// p(M) with coefficients embedded into M's field.
Mat poly_eval_mat(const Poly& p, const Mat& m);

/// Matrix of multiplication by a on L in the basis 1, alpha, ..., alpha^(d-1),
/// over the base field of L.
Mat regular_representation(const Scalar& a);

/// Matrix of the K-linear map sigma: L -> L in the power basis.
Mat automorphism_matrix(const FieldAutomorphism& s);

}  // namespace scalex
