#pragma once

#include <tuple>

#include "complex.hpp"

namespace scalex {

struct CheckItem {
  std::string check;
  bool ok = true;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool ok() const {
    for (auto& i : items)
      if (!i.ok) return false;
    return true;
  }
  void add(const std::string& check, bool okay, const std::string& detail = "") {
    items.push_back({check, okay, detail});
  }
  void merge(const CheckReport& o) {
    items.insert(items.end(), o.items.begin(), o.items.end());
  }
};

/// Homogeneous morphism in a finite DG-category, as coordinates in the
/// chosen basis of Hom^degree(src, dst). A zero-dimensional coordinate
/// column denotes the zero morphism of that degree.
struct DgHom {
  int src = 0, dst = 0;
  int degree = 0;
  Mat coords;  // column vector

  bool is_zero() const { return coords.is_zero(); }
};

/// DG-category with finitely many objects and bounded finite-dimensional
/// hom complexes, given by bases: per ordered pair a cochain complex, plus
/// composition structure constants and identity coordinates.
class FiniteDgCategory {
 public:
  FieldPtr F;
  std::vector<std::string> objects;

  int object_index(const std::string& label) const;
  int size() const { return (int)objects.size(); }

  const CochainComplex& hom(int x, int y) const;
  int hom_dim(int x, int y, int n) const { return hom(x, y).dim(n); }

  // --- construction ---
  void add_object(const std::string& label);
  void set_hom(int x, int y, CochainComplex c);
  /// out += scalar * (g ∘ f) for f the in1 basis element of Hom^(m)(x,y),
  /// g the in2 basis element of Hom^(n)(y,z); flat indices run over degrees
  /// ascending then basis order.
  void add_composition_entry(int x, int y, int z, int flat1, int flat2, int flat_out,
                             const Scalar& c);
  void set_identity(int x, Mat coords_deg0);
  void finalize();  // shape checks on tensors/identities

  // --- flat index bookkeeping (degrees ascending, then index) ---
  int flat_dim(int x, int y) const;
  int flat_of(int x, int y, int degree, int idx) const;
  std::pair<int, int> degree_of_flat(int x, int y, int flat) const;

  // --- morphism algebra ---
  DgHom zero_hom(int x, int y, int degree) const;
  DgHom basis_hom(int x, int y, int degree, int idx) const;
  DgHom identity(int x) const;
  const Mat& identity_coords(int x) const;
  DgHom add_homs(const DgHom& a, const DgHom& b) const;
  DgHom scale_hom(const Scalar& c, const DgHom& a) const;
  DgHom negate(const DgHom& a) const;
  /// g ∘ f for f: x->y, g: y->z.
  DgHom compose(const DgHom& f, const DgHom& g) const;
  DgHom differential(const DgHom& f) const;
  bool equal(const DgHom& a, const DgHom& b) const;

  /// Structure-constant block for (x,y,z) at degrees (m,n):
  /// rows = dim Hom^(m+n)(x,z), cols = dim Hom^m(x,y) * dim Hom^n(y,z),
  /// column index i1 * dim2 + i2.
  Mat comp_block(int x, int y, int z, int m, int n) const;
  /// Keys (x,y,z,m,n) of all stored composition blocks.
  std::vector<std::tuple<int, int, int, int, int>> comp_block_keys() const;

 private:
  std::map<std::pair<int, int>, CochainComplex> homs_;
  std::map<std::tuple<int, int, int, int, int>, Mat> comp_;
  std::map<int, Mat> ids_;
  CochainComplex empty_;
};

/// Axioms: complexes (d² = 0), closed degree-0 identities with unit laws,
/// Leibniz d(g∘f) = dg∘f + (-1)^|g| g∘df on basis pairs, associativity on
/// basis triples.
CheckReport validate_dg_category(const FiniteDgCategory& a);

struct H0Category {
  std::vector<std::string> objects;
  std::map<std::pair<int, int>, int> hom_dim;
  std::map<std::pair<int, int>, Mat> representatives;  // cocycles in Hom^0 coords
  /// (x,y,z) -> B with rows = dim H0(x,z), cols = dim H0(x,y)*dim H0(y,z).
  std::map<std::tuple<int, int, int>, Mat> comp;
  std::map<int, Mat> ids;  // H0 coordinates
};
H0Category h0_category(const FiniteDgCategory& a);

/// Cohomology dimensions of every hom complex (the graded homotopy category
/// dimension table).
std::map<std::pair<int, int>, std::map<int, int>> graded_category(const FiniteDgCategory& a);

struct DgFunctor {
  std::vector<int> object_map;
  /// per source pair (x,y): degree-0 map of hom complexes
  std::map<std::pair<int, int>, GradedMap> hom_maps;
};

/// Image of a morphism under a functor (zero when no hom map is given).
DgHom dg_apply_functor(const FiniteDgCategory& a, const FiniteDgCategory& b, const DgFunctor& f,
                       const DgHom& u);

CheckReport validate_dg_functor(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f);
bool is_quasi_fully_faithful(const FiniteDgCategory& a, const FiniteDgCategory& b,
                             const DgFunctor& f);
/// Bounded search: every object of b receives an H0-invertible closed
/// degree-0 morphism from some F(a), with candidates drawn from H0 basis
/// combinations of bounded support.
bool is_h0_essentially_surjective(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                  const DgFunctor& f, int max_support = 2);
bool is_quasi_equivalence(const FiniteDgCategory& a, const FiniteDgCategory& b,
                          const DgFunctor& f, int max_support = 2);

struct InvertibilityWitness {
  DgHom v;   // closed degree-0 candidate inverse
  DgHom h1;  // u∘v - id = d(h1)
  DgHom h2;  // v∘u - id = d(h2)
};
/// Decides H0-invertibility of a closed degree-0 morphism by an exact
/// linear solve in (v, h1, h2).
std::optional<InvertibilityWitness> is_h0_invertible(const FiniteDgCategory& a, const DgHom& u);

}  // namespace scalex
