#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "base_change.hpp"
#include "helpers.hpp"

using namespace scalex;
using testutil::qm;

namespace {
struct Setup {
  FieldPtr Q = Field::rationals();
  FieldPtr L2 = testutil::q_sqrt2(Q);
  FieldPtr F2 = Field::prime(2);
  FieldPtr F4 = testutil::f4(F2);
  FiniteDgCategory P = example_category("point", Q);
  FiniteDgCategory Pf = example_category("point", F2);
  FiniteDgCategory D = example_category("dual_numbers", Q);
  FiniteDgCategory Df = example_category("dual_numbers", F2);
};
}  // namespace

TEST_CASE("p* of the point carries the regular representation") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  CHECK(ps.x.size() == 2);
  CHECK(ps.x.entries[0].shift == 0);
  REQUIRE(ps.phi.c.count({0, 1}));
  REQUIRE(ps.phi.c.count({1, 0}));
  CHECK(!ps.phi.c.count({0, 0}));
  CHECK(ps.phi.c.at({0, 1}).coords.at(0, 0) == s.Q->from_int(2));
  CHECK(ps.phi.c.at({1, 0}).coords.at(0, 0) == s.Q->one());
  CHECK(validate_module_structure(s.P, ps).ok());

  SUBCASE("identity structure at L = K") {
    ModuleStructure triv;
    triv.x = embed_psi(s.P, 0);
    triv.ext = s.Q;
    triv.phi = tw_identity(s.P, triv.x);
    CHECK(validate_module_structure(s.P, triv).ok());
    ModuleStructure psk = p_star_structure(s.P, s.Q, embed_psi(s.P, 0));
    CHECK(psk.x.size() == 1);
    CHECK(tw_equal_morphisms(s.P, psk.x, psk.x, psk.phi, tw_identity(s.P, psk.x)));
  }

  SUBCASE("phi must satisfy the minimal polynomial") {
    ModuleStructure bad = ps;
    bad.phi = tw_identity(s.P, bad.x);
    CHECK(!validate_module_structure(s.P, bad).ok());
  }
}

TEST_CASE("hom subcomplex dimensions") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  CHECK(hom_subcomplex(s.P, ps, ps).complex.dim(0) == 2);

  ModuleStructure triv;
  triv.x = embed_psi(s.P, 0);
  triv.ext = s.Q;
  triv.phi = tw_identity(s.P, triv.x);
  CHECK(hom_subcomplex(s.P, triv, triv).complex.dim(0) == 1);

  // -phi is the conjugate structure; equivariant maps still form 2 dimensions
  ModuleStructure neg = ps;
  neg.phi = tw_negate(s.P, ps.phi);
  CHECK(validate_module_structure(s.P, neg).ok());
  CHECK(hom_subcomplex(s.P, ps, neg).complex.dim(0) == 2);

  ModuleStructure dps4 = p_star_object(s.Df, s.F4, 0);
  CHECK(hom_subcomplex(s.Df, dps4, dps4).complex.dim(0) == 4);  // F2-dimension
}

TEST_CASE("base change category collapses to L-dimensions") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  BaseChangeCategory b1 = build_base_change_category(s.P, s.L2, {ps}, {"p*(pt)"});
  CHECK(b1.cat.hom(0, 0).dim(0) == 1);
  CHECK(validate_dg_category(b1.cat).ok());
  ModuleStructure neg = ps;
  neg.phi = tw_negate(s.P, ps.phi);
  CHECK(b1.index_of(ps) == 0);
  CHECK(b1.index_of(neg) == -1);

  ModuleStructure triv;
  triv.x = embed_psi(s.P, 0);
  triv.ext = s.Q;
  triv.phi = tw_identity(s.P, triv.x);
  BaseChangeCategory bk = build_base_change_category(s.P, s.Q, {triv});
  CHECK(bk.cat.hom(0, 0).dim(0) == 1);
  CHECK(validate_dg_category(bk.cat).ok());

  ModuleStructure dps4 = p_star_object(s.Df, s.F4, 0);
  BaseChangeCategory b4 = build_base_change_category(s.Df, s.F4, {dps4});
  CHECK(b4.cat.hom(0, 0).dim(0) == 2);
  CHECK(validate_dg_category(b4.cat).ok());

  SUBCASE("L-coordinates round trip") {
    HomSubcomplex hs = hom_subcomplex(s.P, ps, ps);
    for (int c = 0; c < 2; ++c) {
      TwMorphism m = hs.ambient.unflatten(s.P, ps.x, ps.x, 0, hs.basis[0].column(c));
      DgHom h = b1.from_ambient(0, 0, m);
      TwMorphism back = b1.to_ambient(0, 0, h);
      CHECK(tw_equal_morphisms(s.P, ps.x, ps.x, m, back));
    }
  }
}

TEST_CASE("p* is a functor on morphisms") {
  Setup s;
  ModuleStructure dps = p_star_object(s.D, s.L2, 0);
  TwistedComplex psi = embed_psi(s.D, 0);
  DgHom u = s.D.add_homs(s.D.basis_hom(0, 0, 0, 0),
                         s.D.scale_hom(s.Q->from_int(2), s.D.basis_hom(0, 0, 0, 1)));
  DgHom v = s.D.add_homs(s.D.scale_hom(s.Q->from_int(3), s.D.basis_hom(0, 0, 0, 0)),
                         s.D.basis_hom(0, 0, 0, 1));
  TwMorphism tu = embed_psi_hom(s.D, u), tv = embed_psi_hom(s.D, v);
  TwMorphism uv = tw_compose(s.D, psi, psi, psi, tv, tu);  // u∘v
  TwMorphism lhs = p_star_hom(s.D, s.L2, psi, psi, uv);
  TwMorphism rhs = tw_compose(s.D, dps.x, dps.x, dps.x, p_star_hom(s.D, s.L2, psi, psi, tv),
                              p_star_hom(s.D, s.L2, psi, psi, tu));
  CHECK(tw_equal_morphisms(s.D, dps.x, dps.x, lhs, rhs));

  // forgetting the structure gives the plain sum
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  TwistedComplex two = tw_direct_sum(s.P, embed_psi(s.P, 0), embed_psi(s.P, 0));
  CHECK(tw_equal_objects(s.P, p_lower(ps), two));
}

TEST_CASE("extension and restriction are adjoint") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  AdjunctionReport ar = adjunction_check(s.P, s.L2, 0, ps);
  CHECK(ar.report.ok());
  CHECK(ar.left_dims.at(0) == 2);
  CHECK(ar.right_dims.at(0) == 2);

  ModuleStructure psf = p_star_object(s.Pf, s.F4, 0);
  AdjunctionReport ar4 = adjunction_check(s.Pf, s.F4, 0, psf);
  CHECK(ar4.report.ok());
  CHECK(ar4.left_dims.at(0) == 2);

  ModuleStructure dps = p_star_object(s.D, s.L2, 0);
  AdjunctionReport ard = adjunction_check(s.D, s.L2, 0, dps);
  CHECK(ard.report.ok());
  CHECK(ard.left_dims.at(0) == 4);

  ModuleStructure triv;
  triv.x = embed_psi(s.P, 0);
  triv.ext = s.Q;
  triv.phi = tw_identity(s.P, triv.x);
  AdjunctionReport ark = adjunction_check(s.P, s.Q, 0, triv);
  CHECK(ark.report.ok());
  CHECK(ark.left_dims.at(0) == 1);
}

TEST_CASE("adjunction naturality in both variables") {
  Setup s;
  ModuleStructure dps = p_star_object(s.D, s.L2, 0);
  TwistedComplex psi = embed_psi(s.D, 0);
  HomSubcomplex left = hom_subcomplex(s.D, dps, dps);
  TwMorphism iota1;
  iota1.c[{0, 0}] = s.D.identity(0);
  TwMorphism ueps = embed_psi_hom(s.D, s.D.basis_hom(0, 0, 0, 1));
  TwMorphism pueps = p_star_hom(s.D, s.L2, psi, psi, ueps);
  const TwMorphism& v = dps.phi;
  for (int c = 0; c < left.basis[0].cols(); ++c) {
    TwMorphism beta = left.ambient.unflatten(s.D, dps.x, dps.x, 0, left.basis[0].column(c));
    TwMorphism l1 = tw_compose(s.D, psi, dps.x, dps.x, iota1,
                               tw_compose(s.D, dps.x, dps.x, dps.x, pueps, beta));
    TwMorphism r1 = tw_compose(s.D, psi, psi, dps.x, ueps,
                               tw_compose(s.D, psi, dps.x, dps.x, iota1, beta));
    CHECK(tw_equal_morphisms(s.D, psi, dps.x, l1, r1));
    TwMorphism l2 = tw_compose(s.D, psi, dps.x, dps.x, iota1,
                               tw_compose(s.D, dps.x, dps.x, dps.x, beta, v));
    TwMorphism r2 = tw_compose(s.D, psi, dps.x, dps.x,
                               tw_compose(s.D, psi, dps.x, dps.x, iota1, beta), v);
    CHECK(tw_equal_morphisms(s.D, psi, dps.x, l2, r2));
  }
}

TEST_CASE("Galois action on structures") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  AutomorphismGroup g2 = automorphism_group(s.L2);
  REQUIRE(g2.size() == 2);
  ModuleStructure conj = galois_act(s.P, g2.elements[1], ps);
  CHECK(tw_equal_morphisms(s.P, ps.x, ps.x, conj.phi, tw_negate(s.P, ps.phi)));
  CHECK(tw_equal_morphisms(s.P, ps.x, ps.x, galois_act(s.P, g2.elements[0], ps).phi, ps.phi));

  ModuleStructure psf = p_star_object(s.Pf, s.F4, 0);
  AutomorphismGroup gf = automorphism_group(s.F4);
  ModuleStructure frob2 = galois_act(s.Pf, gf.elements[1], galois_act(s.Pf, gf.elements[1], psf));
  CHECK(tw_equal_morphisms(s.Pf, psf.x, psf.x, frob2.phi, psf.phi));

  GaloisEquivariantObject eo = canonical_equivariant_orbit(s.P, g2, ps);
  CHECK(validate_equivariant(s.P, g2, eo).ok());
  GaloisEquivariantObject ef = canonical_equivariant_orbit(s.Pf, gf, psf);
  CHECK(validate_equivariant(s.Pf, gf, ef).ok());
}

TEST_CASE("projection formula") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  AutomorphismGroup g2 = automorphism_group(s.L2);
  ProjectionFormulaReport pf = projection_formula_check(s.P, g2, ps);
  CHECK(pf.report.ok());
  CHECK(pf.lhs.x.size() == 4);
  CHECK(pf.rhs.x.size() == 4);

  ModuleStructure psf = p_star_object(s.Pf, s.F4, 0);
  AutomorphismGroup gf = automorphism_group(s.F4);
  CHECK(projection_formula_check(s.Pf, gf, psf).report.ok());

  SUBCASE("structure outside the image of p*") {
    ModuleStructure t;
    t.ext = s.L2;
    t.x = tw_direct_sum(s.P, embed_psi(s.P, 0), embed_psi(s.P, 0));
    t.phi = scalar_matrix_morphism(s.P, t.x, t.x, qm(s.Q, {{1, 1}, {1, -1}}));  // squares to 2
    CHECK(validate_module_structure(s.P, t).ok());
    CHECK(projection_formula_check(s.P, g2, t).report.ok());
  }

  SUBCASE("ambient with nilpotents") {
    ModuleStructure dps = p_star_object(s.D, s.L2, 0);
    CHECK(projection_formula_check(s.D, g2, dps).report.ok());
  }
}

TEST_CASE("condition-star containment") {
  Setup s;
  ModuleStructure ps = p_star_object(s.P, s.L2, 0);
  ModuleStructure neg = ps;
  neg.phi = tw_negate(s.P, ps.phi);
  CHECK(!star_condition_check(s.P, ps, ps));
  CHECK(!star_condition_check(s.P, neg, ps));

  ModuleStructure triv;
  triv.x = embed_psi(s.P, 0);
  triv.ext = s.Q;
  triv.phi = tw_identity(s.P, triv.x);
  CHECK(star_condition_check(s.P, triv, triv));

  // disjoint supports make the containment vacuous
  auto A2 = example_category("path_algebra_An", s.Q, 2);
  ModuleStructure s1;
  s1.x = embed_psi(A2, 1);
  s1.ext = s.Q;
  s1.phi = tw_identity(A2, s1.x);
  ModuleStructure t0;
  t0.x = embed_psi(A2, 0);
  t0.ext = s.Q;
  t0.phi = tw_identity(A2, t0.x);
  CHECK(star_condition_check(A2, s1, t0));
}

TEST_CASE("tensoring hom complexes with 1_L") {
  Setup s;
  FiniteDgCategory PL = tensor_with_one_l(s.P, s.L2);
  CHECK(PL.size() == 1);
  CHECK(PL.hom(0, 0).dim(0) == 1);
  CHECK(validate_dg_category(PL).ok());
  FiniteDgCategory D4 = tensor_with_one_l(s.Df, s.F4);
  CHECK(D4.hom(0, 0).dim(0) == 2);
  CHECK(validate_dg_category(D4).ok());
}

TEST_CASE("Galois descent") {
  Setup s;
  AutomorphismGroup g2 = automorphism_group(s.L2);
  AutomorphismGroup gf = automorphism_group(s.F4);

  SUBCASE("point over both towers") {
    GaloisEquivariantObject e = canonical_equivariant_pstar(s.P, g2, embed_psi(s.P, 0));
    CHECK(validate_equivariant(s.P, g2, e).ok());
    DescentResult dr = descend(s.P, g2, e);
    CHECK(dr.report.ok());
    CHECK(dr.descended.size() == 1);

    GaloisEquivariantObject ef = canonical_equivariant_pstar(s.Pf, gf, embed_psi(s.Pf, 0));
    DescentResult drf = descend(s.Pf, gf, ef);
    CHECK(drf.report.ok());
    CHECK(drf.descended.size() == 1);
  }

  SUBCASE("matrix ambient") {
    auto M2 = example_category("matrix_algebra", s.Q, 2);
    int bs = 0;
    CHECK(is_full_matrix_category(M2, &bs));
    CHECK(bs == 2);
    CHECK(is_full_matrix_category(s.P, &bs));
    CHECK(bs == 1);
    CHECK(!is_full_matrix_category(s.D));
    GaloisEquivariantObject e = canonical_equivariant_pstar(M2, g2, embed_psi(M2, 0));
    CHECK(validate_equivariant(M2, g2, e).ok());
    DescentResult dr = descend(M2, g2, e);
    CHECK(dr.report.ok());
    CHECK(dr.descended.size() == 1);
  }

  SUBCASE("orbit sums descend to two copies") {
    ModuleStructure ps = p_star_object(s.P, s.L2, 0);
    GaloisEquivariantObject e = canonical_equivariant_orbit(s.P, g2, ps);
    DescentResult dr = descend(s.P, g2, e);
    CHECK(dr.report.ok());
    CHECK(dr.descended.size() == 2);
  }

  SUBCASE("failure modes") {
    auto M2 = example_category("matrix_algebra", s.Q, 2);
    GaloisEquivariantObject e;
    e.s.ext = s.L2;
    e.s.x = embed_psi(M2, 0);
    DgHom phi = M2.zero_hom(0, 0, 0);
    phi.coords = qm(s.Q, {{0}, {2}, {1}, {0}});  // [[0,2],[1,0]] in matrix units
    e.s.phi.degree = 0;
    e.s.phi.c[{0, 0}] = phi;
    CHECK(validate_module_structure(M2, e.s).ok());

    // valid cocycle whose fixed space is not free: no descended object
    DgHom lam = M2.zero_hom(0, 0, 0);
    lam.coords = qm(s.Q, {{3}, {-4}, {2}, {-3}});  // squares to the identity
    GaloisEquivariantObject full = e;
    full.lambda.push_back(tw_identity(M2, e.s.x));
    TwMorphism lamt;
    lamt.degree = 0;
    lamt.c[{0, 0}] = lam;
    full.lambda.push_back(lamt);
    CHECK(validate_equivariant(M2, g2, full).ok());
    bool threw = false;
    try {
      descend(M2, g2, full);
    } catch (const Error& err) {
      threw = err.code == ErrorCode::unsupported_ambient;
    }
    CHECK(threw);

    // lambda = id fails the intertwining condition
    GaloisEquivariantObject brok = e;
    brok.lambda.push_back(tw_identity(M2, e.s.x));
    brok.lambda.push_back(tw_identity(M2, e.s.x));
    bool threw2 = false;
    try {
      descend(M2, g2, brok);
    } catch (const Error& err) {
      threw2 = err.code == ErrorCode::cocycle_failure;
    }
    CHECK(threw2);

    // ambient without a matrix model
    ModuleStructure dps = p_star_object(s.D, s.L2, 0);
    GaloisEquivariantObject de;
    de.s = dps;
    de.lambda.push_back(tw_identity(s.D, dps.x));
    de.lambda.push_back(tw_identity(s.D, dps.x));
    bool threw3 = false;
    try {
      descend(s.D, g2, de);
    } catch (const Error& err) {
      threw3 = err.code == ErrorCode::unsupported_ambient;
    }
    CHECK(threw3);
  }
}

TEST_CASE("the hull functor p* commutes with cones") {
  Setup s;
  HullContext h = hull_of_base_change(s.D, s.L2);
  CHECK(h.bcc.cat.hom(0, 0).dim(0) == 2);
  CHECK(validate_dg_category(h.bcc.cat).ok());
  TwistedComplex psi = embed_psi(s.D, 0);
  TwMorphism eps = embed_psi_hom(s.D, s.D.basis_hom(0, 0, 0, 1));
  ConeData amb = tw_cone(s.D, psi, psi, eps);
  CHECK(validate_twisted(s.D, amb.cone).ok());

  TwistedComplex hpsi = hull_p_star(h, psi);
  CHECK(tw_equal_objects(h.bcc.cat, hpsi, embed_psi(h.bcc.cat, 0)));
  TwMorphism heps = hull_p_star_hom(h, psi, psi, eps);
  ConeData lcone = tw_cone(h.bcc.cat, hpsi, hpsi, heps);
  TwistedComplex direct = hull_p_star(h, amb.cone);
  CHECK(tw_equal_objects(h.bcc.cat, lcone.cone, direct));
  CHECK(validate_twisted(h.bcc.cat, direct).ok());
}

TEST_CASE("hull of a multi-object category composes p* correctly") {
  Setup s;
  auto A3 = example_category("path_algebra_An", s.Q, 3);
  HullContext h = hull_of_base_change(A3, s.L2);
  CHECK((int)h.bcc.structures.size() == 3);
  CHECK(validate_dg_category(h.bcc.cat).ok());
  CHECK(h.bcc.cat.hom(0, 1).dim(0) == 1);
  CHECK(h.bcc.cat.hom(1, 0).dims.empty());
  TwMorphism f01 = embed_psi_hom(A3, A3.basis_hom(0, 1, 0, 0));
  TwMorphism f12 = embed_psi_hom(A3, A3.basis_hom(1, 2, 0, 0));
  TwMorphism f02 = embed_psi_hom(A3, A3.basis_hom(0, 2, 0, 0));
  TwistedComplex p0 = embed_psi(A3, 0), p1 = embed_psi(A3, 1), p2 = embed_psi(A3, 2);
  TwMorphism h01 = hull_p_star_hom(h, p0, p1, f01);
  TwMorphism h12 = hull_p_star_hom(h, p1, p2, f12);
  TwMorphism h02 = hull_p_star_hom(h, p0, p2, f02);
  TwistedComplex q0 = hull_p_star(h, p0), q1 = hull_p_star(h, p1), q2 = hull_p_star(h, p2);
  TwMorphism comp = tw_compose(h.bcc.cat, q0, q1, q2, h01, h12);
  CHECK(tw_equal_morphisms(h.bcc.cat, q0, q2, comp, h02));
}
