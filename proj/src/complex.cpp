#include "complex.hpp"

namespace scalex {

int CochainComplex::total_dim() const {
  int t = 0;
  for (auto& [n, k] : dims) t += k;
  return t;
}

Mat CochainComplex::diff(int n) const {
  auto it = d.find(n);
  if (it != d.end()) return it->second;
  return Mat(F, dim(n + 1), dim(n));
}

void CochainComplex::validate() const {
  for (auto& [n, k] : dims)
    if (k <= 0) throw Error(ErrorCode::input_error, "complex stores a non-positive dimension");
  for (auto& [n, m] : d) {
    if (m.rows() != dim(n + 1) || m.cols() != dim(n))
      throw Error(ErrorCode::shape_mismatch,
                  "differential in degree " + std::to_string(n) + " has wrong shape");
  }
  for (auto& [n, m] : d) {
    Mat next = diff(n + 1);
    if (!(next * m).is_zero())
      throw Error(ErrorCode::input_error,
                  "d∘d != 0 between degrees " + std::to_string(n) + " and " + std::to_string(n + 2));
  }
}

CochainComplex make_complex(FieldPtr F, std::map<int, int> dims, std::map<int, Mat> d) {
  CochainComplex c;
  c.F = std::move(F);
  for (auto& [n, k] : dims)
    if (k > 0) c.dims[n] = k;
  for (auto& [n, m] : d)
    if (m.rows() > 0 && m.cols() > 0 && !m.is_zero()) c.d.emplace(n, m);
  c.validate();
  return c;
}

CochainComplex shift_complex(const CochainComplex& c, int k) {
  CochainComplex r;
  r.F = c.F;
  for (auto& [n, dim] : c.dims) r.dims[n - k] = dim;
  for (auto& [n, m] : c.d) {
    Mat mm = (k % 2 == 0) ? m : -m;
    r.d.emplace(n - k, std::move(mm));
  }
  return r;
}

CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b) {
  CochainComplex r;
  r.F = a.F ? a.F : b.F;
  std::map<int, int> dims;
  for (auto& [n, k] : a.dims) dims[n] += k;
  for (auto& [n, k] : b.dims) dims[n] += k;
  for (auto& [n, k] : dims)
    if (k > 0) r.dims[n] = k;
  for (auto& [n, k] : r.dims) {
    int an = a.dim(n), bn = b.dim(n);
    int an1 = a.dim(n + 1), bn1 = b.dim(n + 1);
    if (an1 + bn1 == 0) continue;
    Mat m(r.F, an1 + bn1, an + bn);
    Mat da = a.diff(n), db = b.diff(n);
    for (int i = 0; i < an1; ++i)
      for (int j = 0; j < an; ++j) m.at(i, j) = da.at(i, j);
    for (int i = 0; i < bn1; ++i)
      for (int j = 0; j < bn; ++j) m.at(an1 + i, an + j) = db.at(i, j);
    if (!m.is_zero()) r.d.emplace(n, std::move(m));
  }
  return r;
}

bool GradedMap::is_zero() const {
  for (auto& [n, m] : comp)
    if (!m.is_zero()) return false;
  return true;
}

GradedMap zero_map(const CochainComplex& v, const CochainComplex& w, int degree) {
  GradedMap f;
  f.degree = degree;
  for (auto& [n, k] : v.dims)
    if (w.dim(n + degree) > 0) f.comp.emplace(n, Mat(v.F, w.dim(n + degree), k));
  return f;
}

GradedMap identity_map(const CochainComplex& v) {
  GradedMap f;
  f.degree = 0;
  for (auto& [n, k] : v.dims) f.comp.emplace(n, Mat::identity(v.F, k));
  return f;
}

GradedMap add(const GradedMap& f, const GradedMap& g) {
  if (f.degree != g.degree) throw Error(ErrorCode::shape_mismatch, "adding maps of different degree");
  GradedMap r = f;
  for (auto& [n, m] : g.comp) {
    auto it = r.comp.find(n);
    if (it == r.comp.end())
      r.comp.emplace(n, m);
    else
      it->second = it->second + m;
  }
  return r;
}

GradedMap scale(const Scalar& c, const GradedMap& f) {
  GradedMap r = f;
  for (auto& [n, m] : r.comp) m = m.scaled(c);
  return r;
}

GradedMap compose_maps(const CochainComplex& v, const CochainComplex& w, const CochainComplex& x,
                       const GradedMap& f, const GradedMap& g) {
  GradedMap r;
  r.degree = f.degree + g.degree;
  for (auto& [n, k] : v.dims) {
    if (x.dim(n + r.degree) == 0) continue;
    Mat fm = f.comp.count(n) ? f.comp.at(n) : Mat(v.F, w.dim(n + f.degree), k);
    int m2 = n + f.degree;
    Mat gm = g.comp.count(m2) ? g.comp.at(m2) : Mat(v.F, x.dim(m2 + g.degree), w.dim(m2));
    r.comp.emplace(n, gm * fm);
  }
  return r;
}

GradedMap map_differential(const CochainComplex& v, const CochainComplex& w, const GradedMap& f) {
  GradedMap r;
  r.degree = f.degree + 1;
  const FieldPtr F = v.F;
  bool odd = (f.degree % 2) != 0;
  for (auto& [n, k] : v.dims) {
    if (w.dim(n + f.degree + 1) == 0) continue;
    Mat fn = f.comp.count(n) ? f.comp.at(n) : Mat(F, w.dim(n + f.degree), k);
    Mat term = w.diff(n + f.degree) * fn;
    int n1 = n + 1;
    Mat fn1 = f.comp.count(n1) ? f.comp.at(n1) : Mat(F, w.dim(n1 + f.degree), v.dim(n1));
    Mat term2 = fn1 * v.diff(n);
    r.comp.emplace(n, odd ? term + term2 : term - term2);
  }
  return r;
}

bool is_closed_map(const CochainComplex& v, const CochainComplex& w, const GradedMap& f) {
  return map_differential(v, w, f).is_zero();
}

Cohomology cohomology(const CochainComplex& c, int n) {
  const FieldPtr F = c.F;
  Cohomology h;
  int dn = c.dim(n);
  if (dn == 0) {
    h.representatives = Mat(F, 0, 0);
    return h;
  }
  Mat ker = kernel_basis(c.diff(n));
  Mat img_cols = c.diff(n - 1);
  // column-space basis of the image, via pivot columns
  std::vector<int> piv;
  rref(img_cols, &piv);
  Mat img(F, dn, (int)piv.size());
  for (size_t i = 0; i < piv.size(); ++i)
    for (int r = 0; r < dn; ++r) img.at(r, (int)i) = img_cols.at(r, piv[i]);
  // first completion of ker over im, in kernel-basis order
  Mat span = img;
  int base_rank = rank(span);
  Mat reps(F, dn, 0);
  for (int j = 0; j < ker.cols(); ++j) {
    Mat cand = Mat::hstack(span, ker.column(j));
    int rk = rank(cand);
    if (rk > base_rank) {
      span = cand;
      base_rank = rk;
      reps = Mat::hstack(reps, ker.column(j));
    }
  }
  h.dim = reps.cols();
  h.representatives = reps;
  return h;
}

std::map<int, int> cohomology_dims(const CochainComplex& c) {
  std::map<int, int> out;
  if (c.dims.empty()) return out;
  for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
    auto h = cohomology(c, n);
    if (h.dim > 0) out[n] = h.dim;
  }
  return out;
}

Mat cohomology_class(const CochainComplex& c, int n, const Mat& z) {
  const FieldPtr F = c.F;
  auto h = cohomology(c, n);
  if (!(c.diff(n) * z).is_zero())
    throw Error(ErrorCode::input_error, "cohomology_class of a non-cocycle");
  Mat img_cols = c.diff(n - 1);
  std::vector<int> piv;
  rref(img_cols, &piv);
  Mat img(F, c.dim(n), (int)piv.size());
  for (size_t i = 0; i < piv.size(); ++i)
    for (int r = 0; r < c.dim(n); ++r) img.at(r, (int)i) = img_cols.at(r, piv[i]);
  Mat basis = Mat::hstack(h.representatives, img);
  auto x = solve(basis, z);
  if (!x)
    throw Error(ErrorCode::internal_error, "cocycle not in span of representatives + image");
  return x->submatrix(0, 0, h.dim, z.cols());
}

HomComplex hom_complex(const CochainComplex& v, const CochainComplex& w) {
  HomComplex out;
  const FieldPtr F = v.F ? v.F : w.F;
  out.complex.F = F;
  if (v.dims.empty() || w.dims.empty()) return out;
  int lo = w.min_degree() - v.max_degree();
  int hi = w.max_degree() - v.min_degree();
  for (int n = lo; n <= hi; ++n) {
    int total = 0;
    std::vector<std::pair<int, int>> blk;
    for (auto& [p, dv] : v.dims) {
      int dw = w.dim(p + n);
      if (dw == 0) continue;
      blk.push_back({p, total});
      total += dv * dw;
    }
    if (total == 0) continue;
    out.complex.dims[n] = total;
    out.blocks[n] = std::move(blk);
  }
  // differential: D(E) columns
  for (auto& [n, total] : out.complex.dims) {
    int total1 = out.complex.dim(n + 1);
    if (total1 == 0) continue;
    Mat D(F, total1, total);
    for (auto& [p, off] : out.blocks[n]) {
      int dv = v.dim(p), dw = w.dim(p + n);
      // basis element E at (row i in W^(p+n), col j in V^p):
      // D(E)^p = d_W ∘ E, D(E)^(p-1) = -(-1)^n E ∘ d_V
      Mat dW = w.diff(p + n);
      const auto& blocks1 = out.blocks.count(n + 1) ? out.blocks.at(n + 1)
                                                    : std::vector<std::pair<int, int>>{};
      int off_p = -1, off_pm1 = -1;
      for (auto& [pp, o] : blocks1) {
        if (pp == p) off_p = o;
        if (pp == p - 1) off_pm1 = o;
      }
      for (int j = 0; j < dv; ++j)
        for (int i = 0; i < dw; ++i) {
          int col = off + i * dv + j;  // row-major within the block
          if (off_p >= 0) {
            int dw1 = w.dim(p + n + 1);
            for (int r = 0; r < dw1; ++r) {
              if (dW.at(r, i).is_zero()) continue;
              D.at(off_p + r * dv + j, col) = F->add(D.at(off_p + r * dv + j, col), dW.at(r, i));
            }
          }
          if (off_pm1 >= 0) {
            Mat dV = v.diff(p - 1);
            int dv1 = v.dim(p - 1);
            bool odd = (n % 2) != 0;
            for (int cidx = 0; cidx < dv1; ++cidx) {
              if (dV.at(j, cidx).is_zero()) continue;
              Scalar val = odd ? dV.at(j, cidx) : F->neg(dV.at(j, cidx));
              int row = off_pm1 + i * dv1 + cidx;
              D.at(row, col) = F->add(D.at(row, col), val);
            }
          }
        }
    }
    if (!D.is_zero()) out.complex.d.emplace(n, std::move(D));
  }
  return out;
}

Mat HomComplex::flatten(const CochainComplex& v, const CochainComplex& w,
                        const GradedMap& f) const {
  const FieldPtr F = complex.F;
  int n = f.degree;
  int total = complex.dim(n);
  Mat out(F, total, 1);
  if (!blocks.count(n)) {
    if (!f.is_zero()) throw Error(ErrorCode::shape_mismatch, "nonzero map flattened into zero space");
    return out;
  }
  for (auto& [p, off] : blocks.at(n)) {
    int dv = v.dim(p), dw = w.dim(p + n);
    Mat m = f.comp.count(p) ? f.comp.at(p) : Mat(F, dw, dv);
    for (int i = 0; i < dw; ++i)
      for (int j = 0; j < dv; ++j) out.at(off + i * dv + j, 0) = m.at(i, j);
  }
  return out;
}

GradedMap HomComplex::unflatten(const CochainComplex& v, const CochainComplex& w, int degree,
                                const Mat& coords) const {
  GradedMap f;
  f.degree = degree;
  if (!blocks.count(degree)) return f;
  for (auto& [p, off] : blocks.at(degree)) {
    int dv = v.dim(p), dw = w.dim(p + degree);
    Mat m(complex.F, dw, dv);
    for (int i = 0; i < dw; ++i)
      for (int j = 0; j < dv; ++j) m.at(i, j) = coords.at(off + i * dv + j, 0);
    f.comp.emplace(p, std::move(m));
  }
  return f;
}

HomotopyOutcome solve_null_homotopy(const CochainComplex& v, const CochainComplex& w,
                                    const GradedMap& f) {
  if (!is_closed_map(v, w, f))
    throw Error(ErrorCode::input_error, "solve_null_homotopy requires a closed map");
  HomComplex H = hom_complex(v, w);
  int k = f.degree;
  Mat target = H.flatten(v, w, f);
  Mat D = H.complex.diff(k - 1);
  HomotopyOutcome out;
  if (D.cols() == 0) {
    if (target.is_zero()) {
      out.homotopy = zero_map(v, w, k - 1);
      return out;
    }
    // no candidates at all: certificate is any functional hitting f
    Mat y(H.complex.F, target.rows(), 1);
    for (int i = 0; i < target.rows(); ++i)
      if (!target.at(i, 0).is_zero()) {
        y.at(i, 0) = H.complex.F->one();
        break;
      }
    out.certificate = y;
    return out;
  }
  auto res = solve_certified(D, target);
  if (res.solution) {
    out.homotopy = H.unflatten(v, w, k - 1, *res.solution);
    return out;
  }
  out.certificate = res.certificate;
  return out;
}

}  // namespace scalex
