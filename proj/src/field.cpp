#include "field.hpp"

#include <algorithm>
#include <sstream>

namespace scalex {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::input_error: return "InputError";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::reducible_polynomial: return "ReduciblePolynomial";
    case ErrorCode::cannot_certify: return "CannotCertify";
    case ErrorCode::unsupported_tower: return "UnsupportedTower";
    case ErrorCode::not_galois: return "NotGalois";
    case ErrorCode::unsupported_ambient: return "UnsupportedAmbient";
    case ErrorCode::cocycle_failure: return "CocycleFailure";
    case ErrorCode::budget_exhausted: return "BudgetExhausted";
    case ErrorCode::internal_error: return "InternalError";
  }
  return "UnknownError";
}

// ---------------- F_p helpers ----------------

std::uint64_t fp_add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
std::uint64_t fp_sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (std::uint64_t)((unsigned __int128)a * b % p);
}
std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}
std::uint64_t fp_inv(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw Error(ErrorCode::division_by_zero, "inverse of 0 in F_p");
  // extended Euclid on (a, p)
  long long t = 0, newt = 1;
  long long r = (long long)p, newr = (long long)a;
  while (newr != 0) {
    long long q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (t < 0) t += (long long)p;
  return (std::uint64_t)t;
}
bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---------------- Scalar basics ----------------

bool Scalar::is_zero() const {
  for (auto& c : q)
    if (c != 0) return false;
  for (auto& c : p)
    if (c != 0) return false;
  return true;
}

bool Scalar::operator==(const Scalar& o) const {
  return q == o.q && p == o.p;
}

std::string IrreducibilityCertificate::describe() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::exhaustive: return "exhaustive";
    case Kind::modp_witness: return "modp_witness(" + std::to_string(witness_prime) + ")";
    case Kind::trusted: return "trusted";
  }
  return "none";
}

// ---------------- Field construction ----------------

FieldPtr Field::rationals() {
  static FieldPtr q = [] {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind = Kind::rationals;
    f->charac = 0;
    f->deg = 1;
    f->name = "Q";
    return FieldPtr(f);
  }();
  return q;
}

FieldPtr Field::prime(std::uint64_t p) {
  if (p >= (1ull << 31) || !is_prime_u64(p))
    throw Error(ErrorCode::input_error, "F_p requires a prime p < 2^31, got " + std::to_string(p));
  auto f = std::shared_ptr<Field>(new Field());
  f->kind = Kind::prime;
  f->charac = p;
  f->deg = 1;
  f->name = "F" + std::to_string(p);
  return f;
}

void Field::check(const Scalar& a) const {
  if (!a.field || !a.field->same_field(*this))
    throw Error(ErrorCode::shape_mismatch, "scalar belongs to a different field");
}

bool Field::same_field(const Field& o) const {
  if (this == &o) return true;
  if (kind != o.kind || charac != o.charac || deg != o.deg) return false;
  if (kind != Kind::extension) return true;
  if (!base->same_field(*o.base)) return false;
  for (size_t i = 0; i < minpoly.size(); ++i)
    if (minpoly[i].q != o.minpoly[i].q || minpoly[i].p != o.minpoly[i].p) return false;
  return true;
}

Scalar Field::zero() const {
  Scalar s;
  s.field = shared_from_this();
  int n = kind == Kind::extension ? deg : 1;
  if (charac == 0)
    s.q.assign(n, Rat(0));
  else
    s.p.assign(n, 0);
  return s;
}

Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long v) const {
  Scalar s = zero();
  if (charac == 0) {
    s.q[0] = Rat(v);
  } else {
    long m = v % (long)charac;
    if (m < 0) m += (long)charac;
    s.p[0] = (std::uint64_t)m;
  }
  return s;
}

Scalar Field::from_rat(const Rat& r) const {
  Scalar s = zero();
  if (charac == 0) {
    s.q[0] = r;
    s.q[0].canonicalize();
  } else {
    mpz_class num = r.get_num(), den = r.get_den();
    mpz_class pz((unsigned long)charac);
    mpz_class nm = num % pz, dm = den % pz;
    if (nm < 0) nm += pz;
    if (dm < 0) dm += pz;
    std::uint64_t d = dm.get_ui();
    if (d == 0) throw Error(ErrorCode::division_by_zero, "denominator vanishes mod p");
    s.p[0] = fp_mul(nm.get_ui(), fp_inv(d, charac), charac);
  }
  return s;
}

Scalar Field::generator() const {
  if (kind != Kind::extension)
    throw Error(ErrorCode::input_error, "generator() requires an extension field");
  Scalar s = zero();
  if (deg == 1) {
    // class of x in K[x]/(x + c0) is -c0
    return embed(base->neg(minpoly[0]));
  }
  if (charac == 0)
    s.q[1] = 1;
  else
    s.p[1] = 1;
  return s;
}

Scalar Field::embed(const Scalar& b) const {
  if (kind != Kind::extension) {
    check(b);
    return b;
  }
  base->check(b);
  Scalar s = zero();
  if (charac == 0)
    s.q[0] = b.q[0];
  else
    s.p[0] = b.p[0];
  return s;
}

std::vector<Scalar> Field::coords(const Scalar& a) const {
  check(a);
  int n = kind == Kind::extension ? deg : 1;
  const FieldPtr b = kind == Kind::extension ? base : shared_from_this();
  std::vector<Scalar> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Scalar c = b->zero();
    if (charac == 0)
      c.q[0] = a.q[i];
    else
      c.p[0] = a.p[i];
    out.push_back(std::move(c));
  }
  return out;
}

Scalar Field::from_coords(const std::vector<Scalar>& cs) const {
  int n = kind == Kind::extension ? deg : 1;
  if ((int)cs.size() > n)
    throw Error(ErrorCode::shape_mismatch, "too many coordinates for field " + name);
  Scalar s = zero();
  for (size_t i = 0; i < cs.size(); ++i) {
    if (charac == 0)
      s.q[i] = cs[i].q.at(0);
    else
      s.p[i] = cs[i].p.at(0);
  }
  return s;
}

// ---------------- arithmetic ----------------

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  Scalar s = zero();
  for (size_t i = 0; i < s.q.size(); ++i) {
    s.q[i] = a.q[i] + b.q[i];
    s.q[i].canonicalize();
  }
  for (size_t i = 0; i < s.p.size(); ++i) s.p[i] = fp_add(a.p[i], b.p[i], charac);
  return s;
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

Scalar Field::neg(const Scalar& a) const {
  check(a);
  Scalar s = a;
  for (auto& c : s.q) c = -c;
  for (auto& c : s.p) c = c == 0 ? 0 : charac - c;
  return s;
}

std::vector<Scalar> ext_mul_coords(const Field& F, const std::vector<Scalar>& a,
                                   const std::vector<Scalar>& b) {
  // convolution then reduction by the precomputed powers of the generator
  const FieldPtr base = F.base;
  int d = F.deg;
  std::vector<Scalar> conv(2 * d - 1, base->zero());
  for (int i = 0; i < d; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (b[j].is_zero()) continue;
      conv[i + j] = base->add(conv[i + j], base->mul(a[i], b[j]));
    }
  }
  std::vector<Scalar> out(conv.begin(), conv.begin() + d);
  for (int k = d; k <= 2 * d - 2; ++k) {
    if (conv[k].is_zero()) continue;
    const auto& red = F.pow_red_[k - d];
    for (int i = 0; i < d; ++i)
      out[i] = base->add(out[i], base->mul(conv[k], red[i]));
  }
  return out;
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  check(a);
  check(b);
  if (kind != Kind::extension) {
    Scalar s = zero();
    if (charac == 0) {
      s.q[0] = a.q[0] * b.q[0];
      s.q[0].canonicalize();
    } else {
      s.p[0] = fp_mul(a.p[0], b.p[0], charac);
    }
    return s;
  }
  auto ac = coords(a), bc = coords(b);
  return from_coords(ext_mul_coords(*this, ac, bc));
}

Scalar Field::pow(const Scalar& a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  Scalar r = one(), x = a;
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

Scalar Field::inv(const Scalar& a) const {
  check(a);
  if (a.is_zero()) throw Error(ErrorCode::division_by_zero, "inverse of 0 in " + name);
  if (kind == Kind::rationals) {
    Scalar s = zero();
    s.q[0] = 1 / a.q[0];
    s.q[0].canonicalize();
    return s;
  }
  if (kind == Kind::prime) {
    Scalar s = zero();
    s.p[0] = fp_inv(a.p[0], charac);
    return s;
  }
  // extended Euclid in base[x] against the minimal polynomial
  Poly r0(minpoly.begin(), minpoly.end());
  Poly r1 = poly_trim(coords(a));
  Poly s0{}, s1{base->one()};
  while (poly_deg(r1) > 0) {
    auto [qt, r2] = poly_divmod(r0, r1);
    Poly s2 = poly_sub(s0, poly_mul(qt, s1));
    r0 = std::move(r1);
    r1 = poly_trim(std::move(r2));
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (poly_deg(r1) != 0)
    throw Error(ErrorCode::internal_error, "gcd(a, minpoly) not constant; reducible modulus?");
  Scalar c = base->inv(r1[0]);
  std::vector<Scalar> out(deg, base->zero());
  for (size_t i = 0; i < s1.size() && i < (size_t)deg; ++i) out[i] = base->mul(s1[i], c);
  return from_coords(out);
}

// ---------------- polynomials ----------------

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}
int poly_deg(const Poly& p) { return (int)p.size() - 1; }

Poly poly_add(const Poly& a, const Poly& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const FieldPtr F = a.empty() ? b[0].field : a[0].field;
  Poly r(std::max(a.size(), b.size()), F->zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F->add(r[i], a[i]);
  for (size_t i = 0; i < b.size(); ++i) r[i] = F->add(r[i], b[i]);
  return poly_trim(r);
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& c : nb) c = -c;
  return poly_add(a, nb);
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  const FieldPtr F = a[0].field;
  Poly r(a.size() + b.size() - 1, F->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
  }
  return poly_trim(r);
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  Poly bb = poly_trim(b);
  if (bb.empty()) throw Error(ErrorCode::division_by_zero, "polynomial division by zero");
  const FieldPtr F = bb[0].field;
  Scalar lead_inv = F->inv(bb.back());
  Poly rem = poly_trim(a);
  if (poly_deg(rem) < poly_deg(bb)) return {{}, rem};
  Poly quot(rem.size() - bb.size() + 1, F->zero());
  for (int k = (int)quot.size() - 1; k >= 0; --k) {
    if ((size_t)(k + poly_deg(bb)) >= rem.size()) continue;
    Scalar c = F->mul(rem[k + poly_deg(bb)], lead_inv);
    if (c.is_zero()) continue;
    quot[k] = c;
    for (size_t i = 0; i < bb.size(); ++i)
      rem[k + i] = F->sub(rem[k + i], F->mul(c, bb[i]));
  }
  return {poly_trim(quot), poly_trim(rem)};
}

Poly poly_gcd_monic(Poly a, Poly b) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    auto [q, r] = poly_divmod(a, b);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const FieldPtr F = a[0].field;
  Scalar c = F->inv(a.back());
  for (auto& x : a) x = F->mul(x, c);
  return a;
}

Scalar poly_eval(const Poly& p, const Scalar& x) {
  const FieldPtr F = x.field;
  Scalar r = F->zero();
  for (int i = (int)p.size() - 1; i >= 0; --i) r = F->add(F->mul(r, x), F->embed(p[i]));
  return r;
}

// ---------------- irreducibility ----------------

namespace {

// x^(p^deg) mod m over F_p, binary powering with an mpz exponent
Poly xq_pow_mod(const Poly& m, std::uint64_t p, int deg_exp) {
  const FieldPtr F = m[0].field;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), (unsigned long)p, (unsigned long)deg_exp);
  Poly base{F->zero(), F->one()};  // x
  auto [q0, r0] = poly_divmod(base, m);
  (void)q0;
  base = r0;
  Poly result{F->one()};
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = poly_divmod(poly_mul(result, result), m).second;
    if (mpz_tstbit(e.get_mpz_t(), i))
      result = poly_divmod(poly_mul(result, base), m).second;
  }
  return result;
}

bool fp_irreducible_rabin(const Poly& m, std::uint64_t p) {
  const FieldPtr F = m[0].field;
  int d = poly_deg(m);
  // x^(p^d) == x mod m
  Poly xq = xq_pow_mod(m, p, d);
  Poly x{F->zero(), F->one()};
  if (poly_trim(poly_sub(xq, x)) != Poly{}) return false;
  // distinct prime divisors r of d: gcd(x^(p^(d/r)) - x, m) == 1
  int dd = d;
  for (int r = 2; r * r <= dd; ++r) {
    if (dd % r) continue;
    while (dd % r == 0) dd /= r;
    Poly g = poly_gcd_monic(poly_sub(xq_pow_mod(m, p, d / r), x), m);
    if (poly_deg(g) != 0) return false;
  }
  if (dd > 1) {
    Poly g = poly_gcd_monic(poly_sub(xq_pow_mod(m, p, d / dd), x), m);
    if (poly_deg(g) != 0) return false;
  }
  return true;
}

// exhaustive monic-factor search; assumes p^(d/2) is small
bool fp_has_small_factor(const Poly& m, std::uint64_t p) {
  const FieldPtr F = m[0].field;
  int d = poly_deg(m);
  for (int k = 1; k <= d / 2; ++k) {
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(k + 1, F->zero());
      std::uint64_t c = code;
      for (int i = 0; i < k; ++i) {
        g[i] = F->from_int((long)(c % p));
        c /= p;
      }
      g[k] = F->one();
      if (poly_divmod(m, g).second.empty()) return true;
    }
  }
  return false;
}

std::vector<std::uint64_t> divisors_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> fac;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    fac.push_back({d, e});
  }
  if (n > 1) fac.push_back({n, 1});
  std::vector<std::uint64_t> divs{1};
  for (auto [pr, e] : fac) {
    size_t sz = divs.size();
    std::uint64_t pw = 1;
    for (int i = 1; i <= e; ++i) {
      pw *= pr;
      for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pw);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// Rational root test on a monic polynomial over Q. Returns:
//   0 = no rational root (search complete), 1 = root found, 2 = inconclusive
int rational_root_status(const std::vector<Scalar>& m) {
  const FieldPtr Q = Field::rationals();
  int d = (int)m.size() - 1;
  // clear denominators
  mpz_class D = 1;
  for (auto& c : m) D = lcm(D, c.q[0].get_den());
  std::vector<mpz_class> A(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    Rat scaled = m[i].q[0] * Rat(D);
    scaled.canonicalize();
    A[i] = scaled.get_num();
  }
  if (A[0] == 0) return d >= 2 ? 1 : 0;  // x divides m
  mpz_class a0 = abs(A[0]), an = abs(A[d]);
  if (!a0.fits_ulong_p() || !an.fits_ulong_p()) return 2;
  auto us = divisors_u64(a0.get_ui());
  auto vs = divisors_u64(an.get_ui());
  if (us.size() * vs.size() > 200000) return 2;
  for (auto u : us)
    for (auto v : vs) {
      for (int sign = 0; sign < 2; ++sign) {
        Rat r((long)(sign ? -(long long)u : (long long)u), (unsigned long)v);
        r.canonicalize();
        Scalar x = Q->from_rat(r);
        Poly mm(m.begin(), m.end());
        if (poly_eval(mm, x).is_zero()) return 1;
      }
    }
  return 0;
}

}  // namespace

FieldPtr Field::extension(FieldPtr base, std::vector<Scalar> m, bool trusted,
                          const std::string& name) {
  if (!base || base->is_extension())
    throw Error(ErrorCode::unsupported_tower, "extension base must be Q or F_p");
  if (m.size() < 2) throw Error(ErrorCode::input_error, "minimal polynomial must have degree >= 1");
  for (auto& c : m) base->check(c);
  if (!(m.back() == base->one()))
    throw Error(ErrorCode::input_error, "minimal polynomial must be monic");
  int d = (int)m.size() - 1;

  IrreducibilityCertificate cert;
  if (d == 1) {
    cert.kind = IrreducibilityCertificate::Kind::exhaustive;
  } else if (base->kind == Kind::prime) {
    std::uint64_t p = base->charac;
    double budget = 1;
    for (int i = 0; i < d / 2 && budget <= (1 << 20); ++i) budget *= (double)p;
    Poly mm(m.begin(), m.end());
    if (budget <= (1 << 20)) {
      if (fp_has_small_factor(mm, p))
        throw Error(ErrorCode::reducible_polynomial, "minimal polynomial factors over F_" + std::to_string(p));
      cert.kind = IrreducibilityCertificate::Kind::exhaustive;
    } else {
      if (!fp_irreducible_rabin(mm, p))
        throw Error(ErrorCode::reducible_polynomial, "minimal polynomial factors over F_" + std::to_string(p));
      cert.kind = IrreducibilityCertificate::Kind::modp_witness;
      cert.witness_prime = p;
    }
  } else {
    int root = rational_root_status(m);
    if (root == 1)
      throw Error(ErrorCode::reducible_polynomial, "minimal polynomial has a rational root");
    if (root == 0 && d <= 3) {
      cert.kind = IrreducibilityCertificate::Kind::exhaustive;
    } else {
      // search for a good prime witness
      mpz_class D = 1;
      for (auto& c : m) D = lcm(D, c.q[0].get_den());
      for (std::uint64_t p = 2; p <= 101 && cert.kind == IrreducibilityCertificate::Kind::none; ++p) {
        if (!is_prime_u64(p)) continue;
        if (D % mpz_class((unsigned long)p) == 0) continue;
        FieldPtr Fp = Field::prime(p);
        Poly mp;
        mp.reserve(m.size());
        for (auto& c : m) mp.push_back(Fp->from_rat(c.q[0]));
        if (fp_irreducible_rabin(mp, p)) {
          cert.kind = IrreducibilityCertificate::Kind::modp_witness;
          cert.witness_prime = p;
        }
      }
      if (cert.kind == IrreducibilityCertificate::Kind::none) {
        if (trusted)
          cert.kind = IrreducibilityCertificate::Kind::trusted;
        else
          throw Error(ErrorCode::cannot_certify,
                      "cannot certify irreducibility (no rational-root conclusion, no prime witness <= 101); "
                      "pass trusted=true to accept");
      }
    }
  }

  auto f = std::shared_ptr<Field>(new Field());
  f->kind = Kind::extension;
  f->charac = base->charac;
  f->base = base;
  f->minpoly = std::move(m);
  f->deg = d;
  f->cert = cert;
  f->name = name.empty() ? base->name + "[a]/deg" + std::to_string(d) : name;

  // reduction table: alpha^k for k in [d, 2d-2]
  if (d >= 2) {
    std::vector<Scalar> cur(d, base->zero());  // alpha^d
    for (int i = 0; i < d; ++i) cur[i] = base->neg(f->minpoly[i]);
    f->pow_red_.push_back(cur);
    for (int k = d + 1; k <= 2 * d - 2; ++k) {
      std::vector<Scalar> nxt(d, base->zero());
      // multiply by alpha: shift, reduce the overflow via alpha^d
      Scalar top = cur[d - 1];
      for (int i = d - 1; i >= 1; --i) nxt[i] = cur[i - 1];
      nxt[0] = base->zero();
      if (!top.is_zero())
        for (int i = 0; i < d; ++i)
          nxt[i] = base->add(nxt[i], base->mul(top, f->pow_red_[0][i]));
      cur = nxt;
      f->pow_red_.push_back(cur);
    }
  }
  return f;
}

// ---------------- printing / parsing ----------------

namespace {
std::string base_scalar_str(const Field& F, const Scalar& a) {
  if (F.charac == 0) return a.q[0].get_str();
  return std::to_string(a.p[0]);
}
}  // namespace

std::string Field::to_string(const Scalar& a) const {
  check(a);
  if (kind != Kind::extension) return base_scalar_str(*this, a);
  auto cs = coords(a);
  std::string out;
  for (int i = 0; i < deg; ++i) {
    if (i) out += ";";
    out += base_scalar_str(*base, cs[i]);
  }
  return out;
}

Scalar Field::parse(const std::string& s) const {
  auto parse_base = [](const Field& F, const std::string& t) -> Scalar {
    try {
      if (F.charac == 0) {
        Rat r(t);
        r.canonicalize();
        return F.from_rat(r);
      }
      size_t pos = 0;
      long long v = std::stoll(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      long long m = v % (long long)F.charac;
      if (m < 0) m += (long long)F.charac;
      Scalar sc = F.zero();
      sc.p[0] = (std::uint64_t)m;
      return sc;
    } catch (const std::exception&) {
      throw Error(ErrorCode::input_error, "bad scalar literal '" + t + "'");
    }
  };
  if (kind != Kind::extension) return parse_base(*this, s);
  std::vector<Scalar> cs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) cs.push_back(parse_base(*base, item));
  if ((int)cs.size() > deg)
    throw Error(ErrorCode::input_error, "scalar '" + s + "' has more than " + std::to_string(deg) + " coordinates");
  return from_coords(cs);
}

// ---------------- automorphisms ----------------

Scalar FieldAutomorphism::apply(const Scalar& a) const {
  auto cs = field->coords(a);
  Scalar r = field->zero();
  Scalar pw = field->one();
  for (size_t i = 0; i < cs.size(); ++i) {
    r = field->add(r, field->mul(field->embed(cs[i]), pw));
    pw = field->mul(pw, gen_image);
  }
  return r;
}

bool FieldAutomorphism::is_identity() const {
  return !field->is_extension() || gen_image == field->generator();
}

bool FieldAutomorphism::operator==(const FieldAutomorphism& o) const {
  return gen_image == o.gen_image;
}

FieldAutomorphism identity_automorphism(const FieldPtr& L) {
  // over a base field the generator plays no role; coords have length one
  if (!L->is_extension()) return FieldAutomorphism{L, L->one()};
  return FieldAutomorphism{L, L->generator()};
}

FieldAutomorphism compose(const FieldAutomorphism& s, const FieldAutomorphism& t) {
  // (s∘t)(alpha) = s(t(alpha))
  return FieldAutomorphism{s.field, s.apply(t.gen_image)};
}

int AutomorphismGroup::index_of(const FieldAutomorphism& s) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == s) return (int)i;
  return -1;
}

int AutomorphismGroup::compose_index(int sigma, int tau) const {
  int k = index_of(compose(elements[sigma], elements[tau]));
  if (k < 0) throw Error(ErrorCode::internal_error, "automorphism group not closed");
  return k;
}

int AutomorphismGroup::inverse_index(int sigma) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (compose_index(sigma, (int)i) == 0) return (int)i;
  throw Error(ErrorCode::internal_error, "automorphism has no inverse in group");
}

AutomorphismGroup automorphism_group(const FieldPtr& L,
                                     const std::optional<std::vector<Scalar>>& user_images) {
  if (!L->is_extension()) {
    AutomorphismGroup G;
    G.field = L;
    G.elements.push_back(identity_automorphism(L));
    G.is_galois = true;
    return G;
  }
  AutomorphismGroup G;
  G.field = L;
  int d = L->degree();
  Poly m(L->minpoly.begin(), L->minpoly.end());
  auto is_root = [&](const Scalar& w) {
    // evaluate the minimal polynomial (coefficients in the base) at w in L
    Scalar r = L->zero(), pw = L->one();
    for (auto& c : m) {
      r = L->add(r, L->mul(L->embed(c), pw));
      pw = L->mul(pw, w);
    }
    return r.is_zero();
  };

  G.elements.push_back(identity_automorphism(L));
  if (d == 1) {
    G.is_galois = true;
    return G;
  }

  if (user_images) {
    for (auto& w : *user_images) {
      if (!w.field || !L->same_field(*w.field))
        throw Error(ErrorCode::input_error, "automorphism image lives in the wrong field");
      if (!is_root(w))
        throw Error(ErrorCode::input_error,
                    "supplied automorphism image " + L->to_string(w) +
                        " is not a root of the minimal polynomial");
      FieldAutomorphism s{L, w};
      if (G.index_of(s) < 0) G.elements.push_back(s);
    }
    // closure check
    for (size_t i = 0; i < G.elements.size(); ++i)
      for (size_t j = 0; j < G.elements.size(); ++j)
        if (G.index_of(compose(G.elements[i], G.elements[j])) < 0)
          throw Error(ErrorCode::input_error, "supplied automorphism table is not closed under composition");
    G.is_galois = (int)G.elements.size() == d;
    return G;
  }

  if (L->charac > 0) {
    // Frobenius powers alpha -> alpha^(p^i), kept when they are roots
    Scalar cur = L->generator();
    for (int i = 1; i < d; ++i) {
      cur = L->pow(cur, (long)L->charac);
      if (is_root(cur)) {
        FieldAutomorphism s{L, cur};
        if (G.index_of(s) < 0) G.elements.push_back(s);
      }
    }
    G.is_galois = (int)G.elements.size() == d;
    return G;
  }

  if (d == 2) {
    // the other root of x^2 + c1 x + c0 is -c1 - alpha
    Scalar w = L->sub(L->embed(L->base->neg(L->minpoly[1])), L->generator());
    if (!is_root(w)) throw Error(ErrorCode::internal_error, "quadratic conjugate is not a root");
    G.elements.push_back(FieldAutomorphism{L, w});
    G.is_galois = true;
    return G;
  }

  throw Error(ErrorCode::unsupported_tower,
              "automorphism groups over Q beyond degree 2 need a user-supplied table");
}

}  // namespace scalex
