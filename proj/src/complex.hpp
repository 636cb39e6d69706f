#pragma once

#include <map>

#include "matrix.hpp"

namespace scalex {

/// Bounded cochain complex of finite-dimensional vector spaces.
/// dims holds only nonzero degrees; d[n] : V^n -> V^{n+1}.
struct CochainComplex {
  FieldPtr F;
  std::map<int, int> dims;
  std::map<int, Mat> d;

  int dim(int n) const {
    auto it = dims.find(n);
    return it == dims.end() ? 0 : it->second;
  }
  int total_dim() const;
  int min_degree() const { return dims.empty() ? 0 : dims.begin()->first; }
  int max_degree() const { return dims.empty() ? 0 : dims.rbegin()->first; }
  /// d^n with the right shape even when absent.
  Mat diff(int n) const;
  /// Shapes and d∘d = 0; throws on violation.
  void validate() const;
};

CochainComplex make_complex(FieldPtr F, std::map<int, int> dims, std::map<int, Mat> d);
/// (C[k])^n = C^{n+k}, d_{C[k]} = (-1)^k d_C.
CochainComplex shift_complex(const CochainComplex& c, int k);
CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b);

/// Homogeneous degree-k map between complexes: components f^n : V^n -> W^{n+k}.
struct GradedMap {
  int degree = 0;
  std::map<int, Mat> comp;

  bool is_zero() const;
};

GradedMap zero_map(const CochainComplex& v, const CochainComplex& w, int degree);
GradedMap identity_map(const CochainComplex& v);
GradedMap add(const GradedMap& f, const GradedMap& g);
GradedMap scale(const Scalar& c, const GradedMap& f);
/// g ∘ f (degrees add).
GradedMap compose_maps(const CochainComplex& v, const CochainComplex& w, const CochainComplex& x,
                       const GradedMap& f, const GradedMap& g);
/// D(f) = d_W ∘ f - (-1)^deg f ∘ d_V, the hom-complex differential.
GradedMap map_differential(const CochainComplex& v, const CochainComplex& w, const GradedMap& f);
bool is_closed_map(const CochainComplex& v, const CochainComplex& w, const GradedMap& f);

struct Cohomology {
  int dim = 0;
  Mat representatives;  // columns are cocycles in V^n coordinates
};

/// H^n with deterministic representatives: first completion of ker d^n
/// over im d^(n-1) in kernel-basis order.
Cohomology cohomology(const CochainComplex& c, int n);
std::map<int, int> cohomology_dims(const CochainComplex& c);
/// Coordinates of [z] in the representative basis of H^n; z must be a cocycle.
Mat cohomology_class(const CochainComplex& c, int n, const Mat& z);

/// The complex Hom(V, W), Hom^n = ⊕_p Hom(V^p, W^(p+n)). Basis order: p
/// ascending, entries row-major.
struct HomComplex {
  CochainComplex complex;
  // flattening data
  std::map<int, std::vector<std::pair<int, int>>> blocks;  // n -> list of (p, offset)

  Mat flatten(const CochainComplex& v, const CochainComplex& w, const GradedMap& f) const;
  GradedMap unflatten(const CochainComplex& v, const CochainComplex& w, int degree,
                      const Mat& coords) const;
};
HomComplex hom_complex(const CochainComplex& v, const CochainComplex& w);

struct HomotopyOutcome {
  std::optional<GradedMap> homotopy;  // h with D(h) = f
  /// On failure: exact functional vanishing on im D but not on f
  /// (evidence that [f] != 0 in H(Hom(V,W))).
  std::optional<Mat> certificate;
};
/// Solves D(h) = f for h of degree deg(f) - 1; f must be closed.
HomotopyOutcome solve_null_homotopy(const CochainComplex& v, const CochainComplex& w,
                                    const GradedMap& f);

}  // namespace scalex
