#include "matrix.hpp"

namespace scalex {

Mat Mat::identity(const FieldPtr& F, int n) {
  Mat m(F, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = F->one();
  return m;
}

bool Mat::is_zero() const {
  for (auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool Mat::operator==(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (!(e_[i] == o.e_[i])) return false;
  return true;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::shape_mismatch, "matrix addition shape mismatch");
  Mat r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = F_->add(r.e_[i], o.e_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const { return *this + (-o); }

Mat Mat::operator-() const {
  Mat r = *this;
  for (auto& x : r.e_) x = F_->neg(x);
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_)
    throw Error(ErrorCode::shape_mismatch, "matrix product shape mismatch");
  Mat r(F_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& x = at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) = F_->add(r.at(i, j), F_->mul(x, o.at(k, j)));
      }
    }
  return r;
}

Mat Mat::scaled(const Scalar& c) const {
  Mat r = *this;
  for (auto& x : r.e_) x = F_->mul(x, c);
  return r;
}

Mat Mat::transposed() const {
  Mat r(F_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::hstack(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_) throw Error(ErrorCode::shape_mismatch, "hstack row mismatch");
  Mat r(a.F_, a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
  }
  return r;
}

Mat Mat::vstack(const Mat& a, const Mat& b) {
  if (a.cols_ != b.cols_) throw Error(ErrorCode::shape_mismatch, "vstack column mismatch");
  Mat r(a.F_, a.rows_ + b.rows_, a.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
  return r;
}

Mat Mat::column(int j) const { return submatrix(0, j, rows_, 1); }

Mat Mat::submatrix(int i0, int j0, int r, int c) const {
  Mat out(F_, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.at(i, j) = at(i0 + i, j0 + j);
  return out;
}

Mat rref(Mat a, std::vector<int>* pivot_cols) {
  const FieldPtr F = a.field();
  int pr = 0;
  if (pivot_cols) pivot_cols->clear();
  for (int c = 0; c < a.cols() && pr < a.rows(); ++c) {
    int pivot = -1;
    for (int r = pr; r < a.rows(); ++r)
      if (!a.at(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != pr)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(pivot, j), a.at(pr, j));
    Scalar inv = F->inv(a.at(pr, c));
    for (int j = 0; j < a.cols(); ++j) a.at(pr, j) = F->mul(a.at(pr, j), inv);
    for (int r = 0; r < a.rows(); ++r) {
      if (r == pr || a.at(r, c).is_zero()) continue;
      Scalar f = a.at(r, c);
      for (int j = 0; j < a.cols(); ++j)
        a.at(r, j) = F->sub(a.at(r, j), F->mul(f, a.at(pr, j)));
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++pr;
  }
  return a;
}

int rank(const Mat& a) {
  std::vector<int> p;
  rref(a, &p);
  return (int)p.size();
}

Mat kernel_basis(const Mat& a) {
  const FieldPtr F = a.field();
  std::vector<int> piv;
  Mat r = rref(a, &piv);
  std::vector<bool> is_piv(a.cols(), false);
  for (int c : piv) is_piv[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < a.cols(); ++c)
    if (!is_piv[c]) free_cols.push_back(c);
  Mat out(F, a.cols(), (int)free_cols.size());
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    out.at(fc, (int)k) = F->one();
    for (size_t pi = 0; pi < piv.size(); ++pi)
      out.at(piv[pi], (int)k) = F->neg(r.at((int)pi, fc));
  }
  return out;
}

std::optional<Mat> solve(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::shape_mismatch, "solve shape mismatch");
  const FieldPtr F = a.field();
  std::vector<int> piv;
  Mat r = rref(Mat::hstack(a, b), &piv);
  for (int c : piv)
    if (c >= a.cols()) return std::nullopt;  // pivot in the rhs block
  Mat x(F, a.cols(), b.cols());
  for (size_t pi = 0; pi < piv.size(); ++pi)
    for (int j = 0; j < b.cols(); ++j) x.at(piv[pi], j) = r.at((int)pi, a.cols() + j);
  return x;
}

SolveOutcome solve_certified(const Mat& a, const Mat& b) {
  if (b.cols() != 1) throw Error(ErrorCode::input_error, "certified solve expects one rhs column");
  SolveOutcome out;
  out.solution = solve(a, b);
  if (out.solution) return out;
  // row-reduce [a | b] alongside a transform block to extract the failing row
  const FieldPtr F = a.field();
  Mat aug = Mat::hstack(Mat::hstack(a, b), Mat::identity(F, a.rows()));
  int pr = 0;
  for (int c = 0; c < a.cols() + 1 && pr < aug.rows(); ++c) {
    int pivot = -1;
    for (int r = pr; r < aug.rows(); ++r)
      if (!aug.at(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (c == a.cols()) {
      // inconsistency: transform row of this pivot is the certificate
      Mat y(F, a.rows(), 1);
      for (int j = 0; j < a.rows(); ++j) y.at(j, 0) = aug.at(pivot, a.cols() + 1 + j);
      out.certificate = y;
      return out;
    }
    if (pivot != pr)
      for (int j = 0; j < aug.cols(); ++j) std::swap(aug.at(pivot, j), aug.at(pr, j));
    Scalar inv = F->inv(aug.at(pr, c));
    for (int j = 0; j < aug.cols(); ++j) aug.at(pr, j) = F->mul(aug.at(pr, j), inv);
    for (int r = 0; r < aug.rows(); ++r) {
      if (r == pr || aug.at(r, c).is_zero()) continue;
      Scalar f = aug.at(r, c);
      for (int j = 0; j < aug.cols(); ++j)
        aug.at(r, j) = F->sub(aug.at(r, j), F->mul(f, aug.at(pr, j)));
    }
    ++pr;
  }
  throw Error(ErrorCode::internal_error, "inconsistent system without certificate row");
}

std::optional<Mat> inverse(const Mat& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  auto x = solve(a, Mat::identity(a.field(), a.rows()));
  if (!x) return std::nullopt;
  // solve() gives a right inverse; for square full-rank it's two-sided, verify
  if (!(*x * a == Mat::identity(a.field(), a.rows()))) return std::nullopt;
  if (!(a * *x == Mat::identity(a.field(), a.rows()))) return std::nullopt;
  return x;
}

Mat poly_eval_mat(const Poly& p, const Mat& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::shape_mismatch, "poly_eval_mat needs a square matrix");
  const FieldPtr F = m.field();
  Mat r(F, m.rows(), m.rows());
  Mat pw = Mat::identity(F, m.rows());
  for (size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) r = r + pw.scaled(F->embed(p[i]));
    if (i + 1 < p.size()) pw = pw * m;
  }
  return r;
}

Mat regular_representation(const Scalar& a) {
  const FieldPtr L = a.field;
  if (!L->is_extension())
    throw Error(ErrorCode::input_error, "regular_representation requires an extension element");
  int d = L->degree();
  Mat m(L->base, d, d);
  Scalar pw = L->one();
  for (int j = 0; j < d; ++j) {
    Scalar col = L->mul(a, pw);
    auto cs = L->coords(col);
    for (int i = 0; i < d; ++i) m.at(i, j) = cs[i];
    pw = L->mul(pw, L->generator());
  }
  return m;
}

Mat automorphism_matrix(const FieldAutomorphism& s) {
  const FieldPtr L = s.field;
  int d = L->degree();
  Mat m(L->base, d, d);
  Scalar pw = L->one();
  for (int j = 0; j < d; ++j) {
    auto cs = L->coords(s.apply(pw));
    for (int i = 0; i < d; ++i) m.at(i, j) = cs[i];
    pw = L->mul(pw, L->generator());
  }
  return m;
}

}  // namespace scalex
