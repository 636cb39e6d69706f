#pragma once

#include "tw.hpp"

namespace scalex {

/// L-module structure on an object of the additive hull of the ambient
/// category: phi is the closed degree-0 endomorphism f(α) of the underlying
/// object, annihilated by the minimal polynomial of L over the ambient
/// field. f(l) for arbitrary l is recovered by polynomial evaluation.
struct ModuleStructure {
  TwistedComplex x;
  FieldPtr ext;   // L; its base field is the ambient coefficient field
  TwMorphism phi;
};

/// Degree of L over the ambient field, with L = K allowed.
int bc_degree(const FieldPtr& k, const FieldPtr& l);
/// Coordinates of l over K in the basis 1, α, ..., α^{d-1}.
std::vector<Scalar> bc_coords(const FieldPtr& k, const FieldPtr& l, const Scalar& v);

CheckReport validate_module_structure(const FiniteDgCategory& a, const ModuleStructure& s);
/// f(l) = Σ c_j phi^j for l = Σ c_j α^j.
TwMorphism module_scalar_action(const FiniteDgCategory& a, const ModuleStructure& s,
                                const Scalar& l);

ModuleStructure p_star_structure(const FiniteDgCategory& a, const FieldPtr& l,
                                 const TwistedComplex& x);
ModuleStructure p_star_object(const FiniteDgCategory& a, const FieldPtr& l, int obj);
/// Diagonal d-fold block of a morphism, functorial for p_star.
TwMorphism p_star_hom(const FiniteDgCategory& a, const FieldPtr& l, const TwistedComplex& src,
                      const TwistedComplex& dst, const TwMorphism& u);
/// Forgetful: the underlying object.
TwistedComplex p_lower(const ModuleStructure& s);

ModuleStructure galois_act(const FiniteDgCategory& a, const FieldAutomorphism& sigma,
                           const ModuleStructure& s);
/// ⊕_{σ∈G} σ*(s) in the element order of the group (identity first).
ModuleStructure orbit_sum(const FiniteDgCategory& a, const AutomorphismGroup& g,
                          const ModuleStructure& s);

/// The subcomplex of morphisms commuting with the module structures
/// (α∘f(l) = g(l)∘α), cut out degreewise by an exact kernel solve.
struct HomSubcomplex {
  TwHomComplex ambient;
  CochainComplex complex;    // in the kernel basis below
  std::map<int, Mat> basis;  // per degree: columns are flattened ambient coordinates
};
HomSubcomplex hom_subcomplex(const FiniteDgCategory& a, const ModuleStructure& s,
                             const ModuleStructure& t);

/// 𝒜_L materialized on a finite list of module structures as an honest
/// DG-category over L. Hom spaces are the equivariant subcomplexes with an
/// L-basis extracted from the K-kernel basis by closing up under the right
/// α-action; composition constants come from exact change-of-basis solves.
struct BaseChangeCategory {
  FiniteDgCategory ambient;  // over K
  FieldPtr L;
  std::vector<ModuleStructure> structures;
  FiniteDgCategory cat;  // over L

  struct PairData {
    HomSubcomplex sub;
    std::map<int, std::vector<int>> chosen;  // L-basis: indices into sub basis columns
    std::map<int, Mat> span;  // columns chosen_c∘f(α^p), c-major, p = 0..d-1
  };
  std::map<std::pair<int, int>, PairData> pairs;  // key (source, target)

  int index_of(const ModuleStructure& s) const;  // exact data match, -1 if absent
  /// L-coordinates of an equivariant K-side morphism; throws when the input
  /// is not in the subcomplex.
  Mat to_l_coords(int i, int j, int degree, const Mat& amb_flat) const;
  TwMorphism to_ambient(int i, int j, const DgHom& h) const;
  DgHom from_ambient(int i, int j, const TwMorphism& u) const;
};
BaseChangeCategory build_base_change_category(const FiniteDgCategory& a, const FieldPtr& l,
                                              const std::vector<ModuleStructure>& structures,
                                              const std::vector<std::string>& names = {});

struct AdjunctionReport {
  CheckReport report;
  std::map<int, int> left_dims;   // Hom_{A_L}(p*C, t), K-dimensions per degree
  std::map<int, int> right_dims;  // Hom_A(C, p_lower t)
};
/// Degreewise bijection Hom_{A_L}(p*C, t) ↔ Hom_A(C, p_lower t):
/// forward is restriction along the first-coordinate inclusion, inverse is
/// u ↦ (f_t(α^j)∘u)_j; both verified mutually inverse on bases.
AdjunctionReport adjunction_check(const FiniteDgCategory& a, const FieldPtr& l, int obj,
                                  const ModuleStructure& t);

struct ProjectionFormulaReport {
  CheckReport report;
  ModuleStructure lhs;  // p*(p_lower(s))
  ModuleStructure rhs;  // orbit_sum(s)
  TwMorphism iso;       // strict closed intertwiner lhs.x -> rhs.x
  TwMorphism iso_inv;
};
/// p*p_*(s) ≅ ⊕_σ σ*(s) via the Galois-Vandermonde intertwiner
/// (f(σ(α^j)))_{σ,j}, inverted exactly through the character matrix over L.
ProjectionFormulaReport projection_formula_check(const FiniteDgCategory& a,
                                                 const AutomorphismGroup& g,
                                                 const ModuleStructure& s);

/// Condition (∗): in every degree, every φ whose differential intertwines
/// the structures already intertwines them itself.
bool star_condition_check(const FiniteDgCategory& a, const ModuleStructure& s,
                          const ModuleStructure& t);

/// Same objects, homs extended to L coefficientwise.
FiniteDgCategory tensor_with_one_l(const FiniteDgCategory& a, const FieldPtr& l);

/// Strict Galois-equivariant structure: per group element σ (group order) an
/// isomorphism λ_σ: σ*(s) -> s with λ_id = id and λ_{u∘v} = λ_v ∘ λ_u.
struct GaloisEquivariantObject {
  ModuleStructure s;
  std::vector<TwMorphism> lambda;
};
CheckReport validate_equivariant(const FiniteDgCategory& a, const AutomorphismGroup& g,
                                 const GaloisEquivariantObject& e);
/// λ_σ = (matrix of σ^{-1} on L) ⊗ id on p*(x).
GaloisEquivariantObject canonical_equivariant_pstar(const FiniteDgCategory& a,
                                                    const AutomorphismGroup& g,
                                                    const TwistedComplex& x);
/// Block permutation structure on ⊕_τ τ*(s).
GaloisEquivariantObject canonical_equivariant_orbit(const FiniteDgCategory& a,
                                                    const AutomorphismGroup& g,
                                                    const ModuleStructure& s);

/// True for one-object categories whose endomorphism complex is a full
/// matrix algebra concentrated in degree 0 in the standard matrix-unit
/// basis; block_size receives the matrix size.
bool is_full_matrix_category(const FiniteDgCategory& a, int* block_size = nullptr);
/// Morphisms between sums in a matrix-model category as honest matrices.
Mat sum_morphism_matrix(const FiniteDgCategory& a, const TwistedComplex& s,
                        const TwistedComplex& t, const TwMorphism& u);
TwMorphism sum_morphism_from_matrix(const FiniteDgCategory& a, const TwistedComplex& s,
                                    const TwistedComplex& t, const Mat& m);

struct DescentResult {
  TwistedComplex descended;  // object of the ambient category (sum of copies)
  TwMorphism iso;            // strict iso p*(descended).x -> s.x
  TwMorphism iso_inv;
  CheckReport report;
};
/// Galois descent in the matrix-model case: per shift group the fixed space
/// of the twisted action u_σ = λ_{σ^{-1}} gives the descended entries and the
/// reconstruction isomorphism [f(α^j)B]_j; the twist is transported through
/// the reconstructions, where equivariance forces it into the image of p*.
/// Everything is verified exactly, including the assembled strict iso.
DescentResult descend(const FiniteDgCategory& a, const AutomorphismGroup& g,
                      const GaloisEquivariantObject& e);

/// Hull context over 𝒜_L: the materialized category with the p*-image of
/// every ambient object, and p* lifted entrywise to twisted complexes.
struct HullContext {
  BaseChangeCategory bcc;
  std::vector<int> pstar_of_object;  // structure index of p*(X) per ambient object
};
HullContext hull_of_base_change(const FiniteDgCategory& a, const FieldPtr& l,
                                const std::vector<ModuleStructure>& extra = {});
TwistedComplex hull_p_star(const HullContext& h, const TwistedComplex& t);
TwMorphism hull_p_star_hom(const HullContext& h, const TwistedComplex& s, const TwistedComplex& t,
                           const TwMorphism& u);

}  // namespace scalex
