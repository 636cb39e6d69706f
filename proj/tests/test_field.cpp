#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "field.hpp"

using namespace scalex;

TEST_CASE("rational arithmetic") {
  auto Q = Field::rationals();
  Scalar a = Q->from_rat(Rat(3, 4)), b = Q->from_rat(Rat(-1, 6));
  CHECK(Q->to_string(Q->add(a, b)) == "7/12");
  CHECK(Q->to_string(Q->mul(a, b)) == "-1/8");
  CHECK(Q->to_string(Q->inv(b)) == "-6");
  CHECK(Q->parse("22/4") == Q->from_rat(Rat(11, 2)));
  CHECK_THROWS_AS((void)Q->inv(Q->zero()), Error);
}

TEST_CASE("prime field arithmetic") {
  auto F7 = Field::prime(7);
  Scalar x = F7->from_int(3);
  CHECK(F7->to_string(F7->inv(x)) == "5");  // 3*5 = 15 = 1 mod 7
  CHECK(F7->to_string(F7->pow(x, 6)) == "1");
  CHECK(F7->parse("10") == F7->from_int(3));
}

TEST_CASE("quadratic extension of the rationals") {
  auto Q = Field::rationals();
  auto Q2 = Field::extension(Q, {Q->from_int(-2), Q->zero(), Q->one()}, false, "Q(sqrt2)");
  Scalar r = Q2->generator();
  CHECK(Q2->to_string(Q2->mul(r, r)) == "2;0");
  CHECK(Q2->cert.kind == IrreducibilityCertificate::Kind::exhaustive);
  // 1/(1+r) = r - 1
  CHECK(Q2->inv(Q2->add(Q2->one(), r)) == Q2->sub(r, Q2->one()));
  Scalar s = Q2->parse("3/2;-1/3");
  CHECK(Q2->to_string(s) == "3/2;-1/3");
}

TEST_CASE("F4 arithmetic and Frobenius") {
  auto F2 = Field::prime(2);
  auto F4 = Field::extension(F2, {F2->one(), F2->one(), F2->one()}, false, "F4");
  Scalar g = F4->generator();
  CHECK(F4->to_string(F4->mul(g, g)) == "1;1");  // g^2 = g + 1
  CHECK(F4->to_string(F4->pow(g, 3)) == "1;0");
  auto G = automorphism_group(F4);
  CHECK(G.is_galois);
  CHECK(G.size() == 2);
  CHECK(G.elements[0].is_identity());
  CHECK(G.elements[1].apply(g) == F4->mul(g, g));
}

TEST_CASE("automorphisms of Q(sqrt2)") {
  auto Q = Field::rationals();
  auto Q2 = Field::extension(Q, {Q->from_int(-2), Q->zero(), Q->one()}, false, "Q(sqrt2)");
  auto G = automorphism_group(Q2);
  CHECK(G.is_galois);
  CHECK(G.size() == 2);
  CHECK(G.elements[1].apply(Q2->generator()) == Q2->neg(Q2->generator()));
}

TEST_CASE("trivial automorphism group of a base field") {
  auto Q = Field::rationals();
  auto G = automorphism_group(Q);
  CHECK(G.is_galois);
  CHECK(G.size() == 1);
  CHECK(G.elements[0].is_identity());
  CHECK(G.elements[0].apply(Q->from_int(5)) == Q->from_int(5));
  auto F3 = Field::prime(3);
  CHECK(automorphism_group(F3).size() == 1);
}

TEST_CASE("non-normal cubic needs a root table") {
  auto Q = Field::rationals();
  auto Qc =
      Field::extension(Q, {Q->from_int(-2), Q->zero(), Q->zero(), Q->one()}, false, "Q(cbrt2)");
  bool no_table = false;
  try {
    automorphism_group(Qc);
  } catch (const Error& e) {
    no_table = e.code == ErrorCode::unsupported_tower;
  }
  CHECK(no_table);
  // a wrong table is rejected, the honest one gives the trivial group
  bool threw = false;
  try {
    automorphism_group(Qc, std::vector<Scalar>{Qc->neg(Qc->generator())});
  } catch (const Error& e) {
    threw = e.code == ErrorCode::input_error;
  }
  CHECK(threw);
  auto G = automorphism_group(Qc, std::vector<Scalar>{Qc->generator()});
  CHECK(!G.is_galois);
  CHECK(G.size() == 1);
}

TEST_CASE("reducible minimal polynomial is rejected") {
  auto Q = Field::rationals();
  bool threw = false;
  try {
    Field::extension(Q, {Q->from_int(-1), Q->zero(), Q->one()}, false, "bad");  // x^2 - 1
  } catch (const Error& e) {
    threw = e.code == ErrorCode::reducible_polynomial;
  }
  CHECK(threw);
}

TEST_CASE("trusted certificates are recorded") {
  auto Q = Field::rationals();
  // x^4 + 1: irreducible over Q but reducible mod every prime, so no
  // witness exists and the caller has to vouch for it.
  std::vector mp = {Q->one(), Q->zero(), Q->zero(), Q->zero(), Q->one()};
  bool threw = false;
  try {
    Field::extension(Q, mp, false, "zeta8");
  } catch (const Error& e) {
    threw = e.code == ErrorCode::cannot_certify;
  }
  CHECK(threw);
  auto L = Field::extension(Q, mp, true, "zeta8");
  CHECK(L->cert.kind == IrreducibilityCertificate::Kind::trusted);
  CHECK(L->deg == 4);
}
