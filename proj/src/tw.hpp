#pragma once

#include "dgcat.hpp"

namespace scalex {

/// One summand C_i[r_i] of a twisted complex.
struct TwEntry {
  int obj = 0;
  int shift = 0;
  bool operator==(const TwEntry& o) const { return obj == o.obj && shift == o.shift; }
};

/// Formal expression (⊕_i C_i[r_i], q) with q strictly upper triangular,
/// q_ij : C_j -> C_i of ambient degree 1 + r_i - r_j, satisfying the
/// Maurer-Cartan equation in the sign discipline below.
///
/// Sign discipline (fixed once, used everywhere): the entrywise differential
/// of a component matrix u is (Du)_ij = (-1)^{r_i(target)} d(u_ij), matrix
/// products carry no extra signs. Then MC reads Dq + q∘q = 0, the hom
/// differential is D(f) = Df + q'∘f - (-1)^|f| f∘q, and both the Leibniz rule
/// and D∘D = 0 hold exactly.
struct TwistedComplex {
  std::vector<TwEntry> entries;
  std::map<std::pair<int, int>, DgHom> q;  // key (i, j) with i < j

  int size() const { return (int)entries.size(); }
};

/// Degree-l morphism of twisted complexes: components c[(i,j)] : C_j -> C'_i
/// of ambient degree l + r'_i - r_j; absent components are zero.
struct TwMorphism {
  int degree = 0;
  std::map<std::pair<int, int>, DgHom> c;
};

int tw_q_degree(const TwistedComplex& t, int i, int j);
DgHom tw_q_at(const FiniteDgCategory& a, const TwistedComplex& t, int i, int j);
DgHom tw_component(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                   const TwMorphism& u, int i, int j);
/// Drops zero q entries / components.
TwistedComplex tw_normalize(const FiniteDgCategory& a, TwistedComplex t);
TwMorphism tw_morphism_normalize(TwMorphism u);
bool tw_equal_objects(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t);
bool tw_equal_morphisms(const FiniteDgCategory& a, const TwistedComplex& s,
                        const TwistedComplex& t, const TwMorphism& u, const TwMorphism& v);

CheckReport validate_twisted(const FiniteDgCategory& a, const TwistedComplex& t);

TwistedComplex embed_psi(const FiniteDgCategory& a, int obj);
TwMorphism embed_psi_hom(const FiniteDgCategory& a, const DgHom& f);
/// Adds k to every shift, q components kept identical as ambient elements.
TwistedComplex tw_shift(const TwistedComplex& t, int k);
/// Triangulated shift: adds k to every shift and scales q by (-1)^k, which
/// preserves the MC equation for every input. Agrees with tw_shift whenever
/// all q components are closed in the ambient category (in particular q = 0).
TwistedComplex tw_sigma(const FiniteDgCategory& a, const TwistedComplex& t, int k = 1);
TwistedComplex tw_direct_sum(const FiniteDgCategory& a, const TwistedComplex& s,
                             const TwistedComplex& t);
/// Block-diagonal sum of morphisms, matching tw_direct_sum entry layout.
TwMorphism tw_morphism_direct_sum(const FiniteDgCategory& a, const TwistedComplex& s1,
                                  const TwistedComplex& t1, const TwMorphism& u1,
                                  const TwistedComplex& s2, const TwistedComplex& t2,
                                  const TwMorphism& u2);

TwMorphism tw_zero_morphism(int degree = 0);
TwMorphism tw_identity(const FiniteDgCategory& a, const TwistedComplex& t);
TwMorphism tw_add(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                  const TwMorphism& u, const TwMorphism& v);
TwMorphism tw_scale(const FiniteDgCategory& a, const Scalar& c, const TwMorphism& u);
TwMorphism tw_negate(const FiniteDgCategory& a, const TwMorphism& u);
/// g ∘ f for f : S -> T, g : T -> U; block matrix product, degrees add.
TwMorphism tw_compose(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                      const TwistedComplex& u_obj, const TwMorphism& f, const TwMorphism& g);
/// D(f) = (-1)^{r_target} d(f) + q_t∘f - (-1)^{|f|} f∘q_s.
TwMorphism tw_differential(const FiniteDgCategory& a, const TwistedComplex& s,
                           const TwistedComplex& t, const TwMorphism& u);

/// Flattened hom complex between twisted complexes with block bookkeeping.
struct TwHomComplex {
  CochainComplex complex;
  struct Block {
    int i = 0, j = 0;        // target entry, source entry
    int amb_degree = 0;      // degree in the ambient hom complex
    int dim = 0, offset = 0;
  };
  std::map<int, std::vector<Block>> blocks;

  Mat flatten(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
              const TwMorphism& u) const;
  TwMorphism unflatten(const FiniteDgCategory& a, const TwistedComplex& s,
                       const TwistedComplex& t, int degree, const Mat& coords) const;
};
TwHomComplex tw_hom_complex(const FiniteDgCategory& a, const TwistedComplex& s,
                            const TwistedComplex& t);

bool tw_is_closed(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                  const TwMorphism& u);

struct ConeData {
  TwistedComplex cone;
  TwMorphism iota;  // target -> cone
  TwMorphism pi;    // cone -> tw_sigma(source)
};
/// Mapping cone of a closed degree-0 morphism u : S -> T. Entries are those
/// of T followed by those of S with shifts raised by one; q is
/// [[q_T, u], [0, -q_S]]. Throws NotClosed (input_error) on non-closed input.
ConeData tw_cone(const FiniteDgCategory& a, const TwistedComplex& s, const TwistedComplex& t,
                 const TwMorphism& u);

/// Homotopy with D(h) = u, found by an exact linear solve in the flattened
/// hom complex; nullopt when u is not a boundary.
std::optional<TwMorphism> tw_solve_null_homotopy(const FiniteDgCategory& a,
                                                 const TwistedComplex& s,
                                                 const TwistedComplex& t, const TwMorphism& u);

struct TwInvertibility {
  TwMorphism v;   // closed degree-0 inverse up to homotopy
  TwMorphism h1;  // u∘v - id_t = D(h1)
  TwMorphism h2;  // v∘u - id_s = D(h2)
};
/// Exact linear decision: witness that a closed degree-0 morphism becomes an
/// isomorphism in H⁰, or definitive failure.
std::optional<TwInvertibility> tw_is_h0_iso(const FiniteDgCategory& a, const TwistedComplex& s,
                                            const TwistedComplex& t, const TwMorphism& u);

/// Homotopy with D(h) = id, i.e. the complex is a zero object of H⁰.
std::optional<TwMorphism> tw_contraction(const FiniteDgCategory& a, const TwistedComplex& t);

/// Strict two-sided inverse of a degree-0 morphism, by linear solve.
std::optional<TwMorphism> tw_strict_inverse(const FiniteDgCategory& a, const TwistedComplex& s,
                                            const TwistedComplex& t, const TwMorphism& u);

/// Entrywise application of a DG-functor to objects and morphisms of the
/// hull; strictly compatible with shifts, sums and cones.
TwistedComplex tw_apply_functor(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f, const TwistedComplex& t);
TwMorphism tw_apply_functor_hom(const FiniteDgCategory& a, const FiniteDgCategory& b,
                                const DgFunctor& f, const TwistedComplex& s,
                                const TwistedComplex& t, const TwMorphism& u);

}  // namespace scalex
