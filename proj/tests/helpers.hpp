#pragma once

#include "examples.hpp"

namespace testutil {

using namespace scalex;

inline Mat qm(FieldPtr F, std::vector<std::vector<long>> rows) {
  Mat m(F, (int)rows.size(), (int)rows[0].size());
  for (int i = 0; i < (int)rows.size(); ++i)
    for (int j = 0; j < (int)rows[0].size(); ++j) m.at(i, j) = F->from_int(rows[i][j]);
  return m;
}

inline FieldPtr q_sqrt2(FieldPtr Q) {
  return Field::extension(Q, {Q->from_int(-2), Q->zero(), Q->one()}, false, "sqrt2");
}

inline FieldPtr f4(FieldPtr F2) {
  return Field::extension(F2, {F2->one(), F2->one(), F2->one()}, false, "F4");
}

// One object X; End(X): deg -1 {c}, deg 0 {id, a}, deg 1 {b}; d(c) = a and
// all products of non-identity elements vanish. The smallest category here
// with a nonzero differential, so the only one where the Leibniz check has
// teeth.
inline FiniteDgCategory sign_cat(FieldPtr F) {
  FiniteDgCategory a;
  a.F = F;
  a.add_object("X");
  CochainComplex h;
  h.F = F;
  h.dims[-1] = 1;
  h.dims[0] = 2;
  h.dims[1] = 1;
  Mat dm1(F, 2, 1);
  dm1.at(1, 0) = F->one();  // d(c) = a (degree-0 basis id, a)
  h.d[-1] = dm1;
  h.d[0] = Mat(F, 1, 2);
  a.set_hom(0, 0, h);
  // flat indices: c=0, id=1, a=2, b=3
  a.add_composition_entry(0, 0, 0, 1, 1, 1, F->one());
  a.add_composition_entry(0, 0, 0, 1, 0, 0, F->one());
  a.add_composition_entry(0, 0, 0, 0, 1, 0, F->one());
  a.add_composition_entry(0, 0, 0, 1, 2, 2, F->one());
  a.add_composition_entry(0, 0, 0, 2, 1, 2, F->one());
  a.add_composition_entry(0, 0, 0, 1, 3, 3, F->one());
  a.add_composition_entry(0, 0, 0, 3, 1, 3, F->one());
  Mat id(F, 2, 1);
  id.at(0, 0) = F->one();
  a.set_identity(0, id);
  a.finalize();
  return a;
}

}  // namespace testutil
