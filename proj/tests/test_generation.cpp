#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generation.hpp"
#include "helpers.hpp"

using namespace scalex;
using testutil::qm;

static void expect_ok(const WitnessCheck& c) {
  CAPTURE(c.node);
  CAPTURE(c.detail);
  CHECK(c.ok);
}

TEST_CASE("exceptional splitting over the point") {
  auto Q = Field::rationals();
  auto P = example_category("point", Q);
  SearchBudget budget;
  TwistedComplex E = embed_psi(P, 0);

  TwistedComplex M = tw_direct_sum(P, tw_sigma(P, E, 3), E);
  auto w = search_generation(P, E, M, 1, budget);
  REQUIRE(w);
  CHECK(w->level == 1);
  CHECK(w->sum.copies == (std::map<int, int>{{0, 1}, {3, 1}}));
  CHECK(w->complement.size() == 0);
  expect_ok(verify_generation_witness(P, E, *w));

  SUBCASE("contractible target splits off nothing") {
    TwistedComplex C = tw_cone(P, E, E, tw_identity(P, E)).cone;
    auto wc = search_generation(P, E, C, 1, budget);
    REQUIRE(wc);
    CHECK(wc->sum.copies.empty());
    expect_ok(verify_generation_witness(P, E, *wc));
  }

  SUBCASE("partially cancelling three-term complex") {
    TwistedComplex T;
    T.entries = {{0, 0}, {0, 1}, {0, 1}};
    T.q[{0, 1}] = P.identity(0);
    auto wt = search_generation(P, E, T, 1, budget);
    REQUIRE(wt);
    CHECK(wt->sum.copies == (std::map<int, int>{{1, 1}}));
    expect_ok(verify_generation_witness(P, E, *wt));
    // its homotopy is load-bearing
    auto badh = *wt;
    badh.inv.h2 = tw_zero_morphism(-1);
    CHECK(!verify_generation_witness(P, E, badh).ok);
  }

  SUBCASE("mechanical witness transforms") {
    TwistedComplex T;
    T.entries = {{0, 0}, {0, 1}, {0, 1}};
    T.q[{0, 1}] = P.identity(0);
    auto wt = search_generation(P, E, T, 1, budget);
    REQUIRE(wt);

    auto wp = pad_witness(P, *w);
    CHECK(wp.level == 2);
    expect_ok(verify_generation_witness(P, E, wp));
    auto wpp = pad_witness(P, wp);
    expect_ok(verify_generation_witness(P, E, wpp));
    for (int j : {-2, -1, 1, 2, 3}) {
      auto ws = shift_witness(P, *w, j);
      expect_ok(verify_generation_witness(P, E, ws));
      CHECK(tw_equal_objects(P, ws.target, tw_sigma(P, M, j)));
      auto wps = shift_witness(P, wpp, j);
      expect_ok(verify_generation_witness(P, E, wps));
    }
    auto wsum = sum_witness(P, E, *w, *wt);
    expect_ok(verify_generation_witness(P, E, wsum));
    CHECK(tw_equal_objects(P, wsum.target, tw_direct_sum(P, M, T)));
    auto wmix = sum_witness(P, E, wp, *wt);  // mixed levels: pad then combine
    CHECK(wmix.level == 2);
    expect_ok(verify_generation_witness(P, E, wmix));
    CHECK(tw_equal_objects(P, wmix.target, tw_direct_sum(P, M, T)));
  }
}

TEST_CASE("dual numbers need a second level for cone(eps)") {
  auto Q = Field::rationals();
  auto D = example_category("dual_numbers", Q);
  SearchBudget budget;
  TwistedComplex E = embed_psi(D, 0);
  TwMorphism eps;
  eps.degree = 0;
  eps.c[{0, 0}] = D.basis_hom(0, 0, 0, 1);
  TwistedComplex M = tw_cone(D, E, E, eps).cone;

  CHECK(!search_generation(D, E, M, 1, budget));
  auto w2 = search_generation(D, E, M, 2, budget);
  REQUIRE(w2);
  CHECK(w2->level == 2);
  REQUIRE(w2->children.size() == 2);
  CHECK(w2->children[0].level == 1);
  expect_ok(verify_generation_witness(D, E, *w2));
  CHECK(tw_equal_objects(D, w2->target, M));

  TwistedComplex S2 = tw_direct_sum(D, E, tw_sigma(D, E, 2));
  auto w1 = search_generation(D, E, S2, 1, budget);
  REQUIRE(w1);
  CHECK(w1->complement.size() == 0);
  expect_ok(verify_generation_witness(D, E, *w1));

  SUBCASE("transforms of a composite witness") {
    auto ws = shift_witness(D, *w2, 1);
    expect_ok(verify_generation_witness(D, E, ws));
    CHECK(tw_equal_objects(D, ws.target, tw_sigma(D, M, 1)));
    auto wsum = sum_witness(D, E, *w2, *w2);
    expect_ok(verify_generation_witness(D, E, wsum));
    CHECK(tw_equal_objects(D, wsum.target, tw_direct_sum(D, M, M)));
    auto wmix = sum_witness(D, E, *w1, *w2);
    expect_ok(verify_generation_witness(D, E, wmix));
  }

  SUBCASE("dimension bound over both targets") {
    auto bound = dimension_upper_bound(D, E, {S2, M}, budget);
    REQUIRE(bound);
    CHECK(bound->k == 2);
    CHECK(bound->witnesses.size() == 2);
    for (auto& bw : bound->witnesses) {
      CHECK(bw.level == 2);
      expect_ok(verify_generation_witness(D, E, bw));
    }
  }

  SUBCASE("tampered witnesses are rejected") {
    auto bad = *w2;
    bad.iso = tw_zero_morphism(0);
    auto chk = verify_generation_witness(D, E, bad);
    CHECK(!chk.ok);
    CHECK(chk.node == "root");
    auto bad2 = *w2;
    bad2.children[0].level = 2;
    CHECK(!verify_generation_witness(D, E, bad2).ok);
    auto bad3 = *w2;
    bad3.gamma = tw_negate(D, bad3.gamma);
    CHECK(!verify_generation_witness(D, E, bad3).ok);
  }

  SUBCASE("budget exhaustion is reported") {
    SearchBudget tiny;
    tiny.node_limit = 3;
    SearchOutcome out = search_generation_ex(D, E, M, 2, tiny);
    CHECK(!out.witness);
    CHECK(out.budget_exhausted);
    // under the default budget the level-1 candidate space is not exhausted
    SearchOutcome deflt = search_generation_ex(D, E, M, 1, budget);
    CHECK(!deflt.witness);
    CHECK(deflt.budget_exhausted);
    // with room to spare the level-1 miss is a definitive no
    SearchBudget wide;
    wide.node_limit = 50000;
    SearchOutcome miss = search_generation_ex(D, E, M, 1, wide);
    CHECK(!miss.witness);
    CHECK(!miss.budget_exhausted);
  }
}

TEST_CASE("generator with several q-components over A2") {
  auto Q = Field::rationals();
  auto A2 = example_category("path_algebra_An", Q, 2);
  SearchBudget budget;
  TwistedComplex V0 = embed_psi(A2, 0), V1 = embed_psi(A2, 1);
  TwMorphism f01;
  f01.degree = 0;
  f01.c[{0, 0}] = A2.basis_hom(0, 1, 0, 0);
  TwistedComplex C01 = tw_cone(A2, V0, V1, f01).cone;
  TwistedComplex E = tw_direct_sum(A2, tw_direct_sum(A2, V0, V1), C01);
  CHECK(q_components(E).size() == 3);

  auto bound = dimension_upper_bound(A2, E, {V0, V1, C01}, budget);
  REQUIRE(bound);
  CHECK(bound->k == 1);
  for (auto& bw : bound->witnesses) expect_ok(verify_generation_witness(A2, E, bw));
  CHECK(bound->witnesses[0].complement.size() == 3);

  TwistedComplex E2 = tw_direct_sum(A2, V0, V1);
  CHECK(!search_generation(A2, E2, C01, 1, budget));
  auto w2 = search_generation(A2, E2, C01, 2, budget);
  REQUIRE(w2);
  expect_ok(verify_generation_witness(A2, E2, *w2));
}

TEST_CASE("witness transport from the hull back to the base") {
  auto Q = Field::rationals();
  auto L2 = testutil::q_sqrt2(Q);
  auto F2 = Field::prime(2);
  auto F4 = testutil::f4(F2);
  SearchBudget budget;

  SUBCASE("point over both towers") {
    for (int which = 0; which < 2; ++which) {
      FieldPtr F = which == 0 ? Q : (FieldPtr)F2;
      FieldPtr L = which == 0 ? L2 : (FieldPtr)F4;
      auto P = example_category("point", F);
      auto h = hull_of_base_change(P, L);
      auto g = automorphism_group(L);
      REQUIRE(g.is_galois);
      TwistedComplex E = embed_psi(P, 0);
      TwistedComplex M = tw_direct_sum(P, E, tw_sigma(P, E, 1));
      TwistedComplex ML = hull_p_star(h, M);
      TwistedComplex EL = hull_p_star(h, E);
      auto wl = search_generation(h.bcc.cat, EL, ML, 1, budget);
      REQUIRE(wl);
      expect_ok(verify_generation_witness(h.bcc.cat, EL, *wl));
      auto wk = galois_transport_witness(h, g, E, M, *wl);
      expect_ok(verify_generation_witness(P, E, wk));
      TwistedComplex M2 = tw_direct_sum(P, M, M);
      CHECK(tw_equal_objects(P, wk.target, M2));
      for (auto& [s, m] : wk.sum.copies) CHECK(m % 2 == 0);
    }
  }

  SUBCASE("A2 over F4 including a level-2 witness") {
    auto A2 = example_category("path_algebra_An", F2, 2);
    auto h = hull_of_base_change(A2, F4);
    auto g = automorphism_group(F4);
    TwistedComplex V0 = embed_psi(A2, 0), V1 = embed_psi(A2, 1);
    TwMorphism f01;
    f01.degree = 0;
    f01.c[{0, 0}] = A2.basis_hom(0, 1, 0, 0);
    TwistedComplex C01 = tw_cone(A2, V0, V1, f01).cone;
    TwistedComplex E = tw_direct_sum(A2, tw_direct_sum(A2, V0, V1), C01);
    TwistedComplex EL = hull_p_star(h, E);

    for (auto& M : {V0, V1, C01}) {
      TwistedComplex ML = hull_p_star(h, M);
      auto wl = search_generation(h.bcc.cat, EL, ML, 1, budget);
      REQUIRE(wl);
      expect_ok(verify_generation_witness(h.bcc.cat, EL, *wl));
      auto wk = galois_transport_witness(h, g, E, M, *wl);
      expect_ok(verify_generation_witness(A2, E, wk));
      CHECK(tw_equal_objects(A2, wk.target, tw_direct_sum(A2, M, M)));
    }

    TwistedComplex E2 = tw_direct_sum(A2, V0, V1);
    TwistedComplex E2L = hull_p_star(h, E2);
    auto wl2 = search_generation(h.bcc.cat, E2L, hull_p_star(h, C01), 2, budget);
    REQUIRE(wl2);
    auto wk2 = galois_transport_witness(h, g, E2, C01, *wl2);
    CHECK(wk2.level == 2);
    expect_ok(verify_generation_witness(A2, E2, wk2));
    CHECK(tw_equal_objects(A2, wk2.target, tw_direct_sum(A2, C01, C01)));
  }

  SUBCASE("degenerate tower L = K") {
    auto P = example_category("point", Q);
    auto h = hull_of_base_change(P, Q);
    auto g = automorphism_group(Q);
    TwistedComplex E = embed_psi(P, 0);
    TwistedComplex M = tw_direct_sum(P, E, E);
    auto wl = search_generation(h.bcc.cat, hull_p_star(h, E), hull_p_star(h, M), 1, budget);
    REQUIRE(wl);
    auto wk = galois_transport_witness(h, g, E, M, *wl);
    expect_ok(verify_generation_witness(P, E, wk));
    CHECK(tw_equal_objects(P, wk.target, M));
    CHECK(wk.sum.copies == wl->sum.copies);
  }

  SUBCASE("transport error cases") {
    auto P = example_category("point", Q);
    ModuleStructure twisted;
    twisted.x = tw_direct_sum(P, embed_psi(P, 0), embed_psi(P, 0));
    twisted.ext = L2;
    twisted.phi = scalar_matrix_morphism(P, twisted.x, twisted.x, qm(Q, {{0, 2}, {1, 0}}));
    auto h = hull_of_base_change(P, L2, {twisted});
    int extra_index = -1;
    for (int i = 0; i < (int)h.bcc.structures.size(); ++i)
      if (i != h.pstar_of_object[0]) extra_index = i;
    REQUIRE(extra_index >= 0);
    TwistedComplex bad = embed_psi(h.bcc.cat, extra_index);
    bool threw = false;
    try {
      hull_flatten_object(h, bad);
    } catch (const Error& e) {
      threw = e.code == ErrorCode::cocycle_failure;
    }
    CHECK(threw);

    auto g = automorphism_group(L2);
    TwistedComplex E = embed_psi(P, 0);
    auto wl = search_generation(h.bcc.cat, hull_p_star(h, E), hull_p_star(h, E), 1, budget);
    REQUIRE(wl);
    bool threw2 = false;
    try {
      galois_transport_witness(h, g, E, tw_sigma(P, E, 1), *wl);
    } catch (const Error& e) {
      threw2 = e.code == ErrorCode::input_error;
    }
    CHECK(threw2);
  }
}
