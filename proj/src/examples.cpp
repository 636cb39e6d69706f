#include "examples.hpp"

namespace scalex {

static FiniteDgCategory point_cat(FieldPtr F) {
  FiniteDgCategory a;
  a.F = F;
  a.add_object("pt");
  CochainComplex h;
  h.F = F;
  h.dims[0] = 1;
  a.set_hom(0, 0, h);
  a.add_composition_entry(0, 0, 0, 0, 0, 0, F->one());
  Mat id(F, 1, 1);
  id.at(0, 0) = F->one();
  a.set_identity(0, id);
  a.finalize();
  return a;
}

static FiniteDgCategory dual_numbers_cat(FieldPtr F) {
  FiniteDgCategory a;
  a.F = F;
  a.add_object("D");
  CochainComplex h;
  h.F = F;
  h.dims[0] = 2;  // basis 1, eps
  a.set_hom(0, 0, h);
  a.add_composition_entry(0, 0, 0, 0, 0, 0, F->one());
  a.add_composition_entry(0, 0, 0, 0, 1, 1, F->one());
  a.add_composition_entry(0, 0, 0, 1, 0, 1, F->one());
  Mat id(F, 2, 1);
  id.at(0, 0) = F->one();
  a.set_identity(0, id);
  a.finalize();
  return a;
}

static FiniteDgCategory matrix_cat(FieldPtr F, int n) {
  FiniteDgCategory a;
  a.F = F;
  a.add_object("M");
  CochainComplex h;
  h.F = F;
  h.dims[0] = n * n;  // unit basis e_{rc}, flat index r*n + c
  a.set_hom(0, 0, h);
  for (int r1 = 0; r1 < n; ++r1)
    for (int c1 = 0; c1 < n; ++c1)
      for (int r2 = 0; r2 < n; ++r2)
        for (int c2 = 0; c2 < n; ++c2)
          if (c2 == r1)
            a.add_composition_entry(0, 0, 0, r1 * n + c1, r2 * n + c2, r2 * n + c1, F->one());
  Mat id(F, n * n, 1);
  for (int i = 0; i < n; ++i) id.at(i * n + i, 0) = F->one();
  a.set_identity(0, id);
  a.finalize();
  return a;
}

static FiniteDgCategory path_an_cat(FieldPtr F, int n) {
  FiniteDgCategory a;
  a.F = F;
  for (int i = 0; i < n; ++i) a.add_object("v" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CochainComplex h;
      h.F = F;
      if (i <= j) h.dims[0] = 1;
      a.set_hom(i, j, h);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) a.add_composition_entry(i, j, k, 0, 0, 0, F->one());
  for (int i = 0; i < n; ++i) {
    Mat id(F, 1, 1);
    id.at(0, 0) = F->one();
    a.set_identity(i, id);
  }
  a.finalize();
  return a;
}

FiniteDgCategory example_category(const std::string& name, FieldPtr F, int n) {
  if (name == "point") return point_cat(F);
  if (name == "dual_numbers") return dual_numbers_cat(F);
  if (name == "matrix_algebra") {
    if (n < 1) throw Error(ErrorCode::input_error, "matrix_algebra needs n >= 1");
    return matrix_cat(F, n);
  }
  if (name == "path_algebra_An") {
    if (n < 1) throw Error(ErrorCode::input_error, "path_algebra_An needs n >= 1");
    return path_an_cat(F, n);
  }
  throw Error(ErrorCode::input_error, "unknown example category '" + name + "'");
}

std::vector<std::string> example_category_names() {
  return {"point", "matrix_algebra", "dual_numbers", "path_algebra_An"};
}

TwMorphism scalar_matrix_morphism(const FiniteDgCategory& a, const TwistedComplex& src,
                                  const TwistedComplex& dst, const Mat& m) {
  if (m.rows() != dst.size() || m.cols() != src.size())
    throw Error(ErrorCode::shape_mismatch, "scalar matrix does not match entry counts");
  TwMorphism u;
  u.degree = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).is_zero()) continue;
      if (dst.entries[i].obj != src.entries[j].obj ||
          dst.entries[i].shift != src.entries[j].shift)
        throw Error(ErrorCode::input_error,
                    "scalar matrix entry connects mismatched summands");
      u.c[{i, j}] = a.scale_hom(m.at(i, j), a.identity(src.entries[j].obj));
    }
  return u;
}

}  // namespace scalex
