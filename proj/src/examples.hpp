#pragma once

#include "base_change.hpp"

namespace scalex {

/// Shipped model categories, all concentrated in degree 0:
///   point            — one object, End = K
///   matrix_algebra   — one object, End = n×n matrices in the unit basis
///   dual_numbers     — one object, End = K[ε]/(ε²), basis {1, ε}
///   path_algebra_An  — n vertex objects, Hom(i,j) one-dimensional for i ≤ j
/// `n` is ignored where it makes no sense.
FiniteDgCategory example_category(const std::string& name, FieldPtr F, int n = 2);
std::vector<std::string> example_category_names();

/// Degree-0 morphism between sums of copies of single objects, given by a
/// scalar matrix acting through identities (rows index dst entries, columns
/// src entries; a nonzero entry requires equal underlying objects).
TwMorphism scalar_matrix_morphism(const FiniteDgCategory& a, const TwistedComplex& src,
                                  const TwistedComplex& dst, const Mat& m);

}  // namespace scalex
