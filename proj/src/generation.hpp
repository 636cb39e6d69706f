#pragma once

#include "base_change.hpp"

namespace scalex {

/// Multiset of shifted generator copies: shift -> multiplicity (> 0).
/// The associated object is ⊕_s E[s]^{m_s}, shifts ascending, copies
/// consecutive.
struct SumSpec {
  std::map<int, int> copies;
  int total() const;
};
TwistedComplex sum_spec_object(const FiniteDgCategory& a, const TwistedComplex& e,
                               const SumSpec& spec);

/// Certificate that target lies in the k-step closure of the generator under
/// shifts, finite sums, summands and isomorphisms (level 1), and cones of
/// closed maps between lower levels (level >= 2). All isomorphism data is
/// stored explicitly so verification is a finite exact recomputation.
struct GenerationWitness {
  int level = 1;
  TwistedComplex target;
  SumSpec sum;                              // level 1: the shifted-sum object
  std::vector<GenerationWitness> children;  // level >= 2: {level k-1, level 1}
  TwMorphism gamma;  // closed deg 0: sigma(children[1].target, -1) -> children[0].target
  TwistedComplex complement;
  TwMorphism iso;      // target ⊕ complement -> sum object (resp. cone(gamma))
  TwInvertibility inv;
};

struct WitnessCheck {
  bool ok = true;
  std::string node;  // path of the first failing node, e.g. "root.step.base"
  std::string detail;
};
WitnessCheck verify_generation_witness(const FiniteDgCategory& a, const TwistedComplex& e,
                                       const GenerationWitness& w);

struct SearchBudget {
  int shift_window = 2;             // candidate shifts range over [-w, w]
  int max_multiplicity = 2;         // total copies per candidate multiset
  int max_coefficient_support = 2;  // basis elements combined into one map
  int node_limit = 200;             // candidates tried / maximum level probed
};

/// Bounded deterministic search; an empty result never means the target
/// fails to generate — either the candidate space or the node budget ran out,
/// and `budget_exhausted` distinguishes the two.
struct SearchOutcome {
  std::optional<GenerationWitness> witness;
  bool budget_exhausted = false;
};
SearchOutcome search_generation_ex(const FiniteDgCategory& a, const TwistedComplex& e,
                                   const TwistedComplex& m, int k,
                                   const SearchBudget& budget);
std::optional<GenerationWitness> search_generation(const FiniteDgCategory& a,
                                                   const TwistedComplex& e,
                                                   const TwistedComplex& m, int k,
                                                   const SearchBudget& budget);

// Mechanical witness transforms; each output verifies whenever the input does.
GenerationWitness pad_witness(const FiniteDgCategory& a, const GenerationWitness& w);
GenerationWitness shift_witness(const FiniteDgCategory& a, const GenerationWitness& w, int j);
GenerationWitness sum_witness(const FiniteDgCategory& a, const TwistedComplex& e,
                              const GenerationWitness& wa, const GenerationWitness& wb);

/// Strict decomposition of a twisted complex into its q-connected entry
/// components, ordered by least entry index.
std::vector<std::vector<int>> q_components(const TwistedComplex& t);
TwistedComplex component_object(const TwistedComplex& t, const std::vector<int>& entries);

/// The forgetful functor applied entrywise to hull-level twisted complexes:
/// each entry must be the p*-image of an ambient object; it is replaced by
/// its d underlying copies, morphisms by their underlying block matrices.
TwistedComplex hull_flatten_object(const HullContext& h, const TwistedComplex& t);
TwMorphism hull_flatten_hom(const HullContext& h, const TwistedComplex& s,
                            const TwistedComplex& t, const TwMorphism& u);

/// Converts a witness for p*(m) over the base-change hull (generator p*(e))
/// into an ambient witness for m^{⊕d} from e, by applying the forgetful
/// functor nodewise; sums of shifted p*(e)-copies become sums of shifted
/// e-copies with multiplicities scaled by d, rearranged by explicit strict
/// permutation isomorphisms.
GenerationWitness galois_transport_witness(const HullContext& h, const AutomorphismGroup& g,
                                           const TwistedComplex& e, const TwistedComplex& m,
                                           const GenerationWitness& w);

struct DimensionBound {
  int k = 0;
  std::vector<GenerationWitness> witnesses;  // one per listed object, level k
};
/// Smallest k (up to budget.node_limit) such that every listed object has a
/// verified level-k witness from e; empty when the budget runs out.
std::optional<DimensionBound> dimension_upper_bound(const FiniteDgCategory& a,
                                                    const TwistedComplex& e,
                                                    const std::vector<TwistedComplex>& objects,
                                                    const SearchBudget& budget);

}  // namespace scalex
