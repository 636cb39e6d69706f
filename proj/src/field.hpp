#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace scalex {

using Rat = mpq_class;

enum class ErrorCode {
  input_error,
  shape_mismatch,
  division_by_zero,
  reducible_polynomial,
  cannot_certify,
  unsupported_tower,
  not_galois,
  unsupported_ambient,
  cocycle_failure,
  budget_exhausted,
  internal_error,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

const char* error_code_name(ErrorCode c);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Element of a field in the supported tower (Q, F_p, or a simple extension
/// of one of those). Coordinates are over the base field of the extension;
/// base-field elements have a single coordinate.
struct Scalar {
  FieldPtr field;
  std::vector<Rat> q;            // coordinates when characteristic 0
  std::vector<std::uint64_t> p;  // coordinates when characteristic p

  bool is_zero() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
};

struct IrreducibilityCertificate {
  enum class Kind { none, exhaustive, modp_witness, trusted };
  Kind kind = Kind::none;
  std::uint64_t witness_prime = 0;
  std::string describe() const;
};

/// A field in the tower. Base fields (Q, F_p) and simple extensions
/// K[x]/(m) share this type; deg == 1 exactly for base fields and for
/// degree-1 extensions (L = K).
class Field : public std::enable_shared_from_this<Field> {
 public:
  enum class Kind { rationals, prime, extension };

  Kind kind;
  std::uint64_t charac = 0;  // 0 or p
  std::string name;

  // extension data (kind == extension)
  FieldPtr base;                 // Q or F_p
  std::vector<Scalar> minpoly;   // monic, coefficients in base, length deg+1
  int deg = 1;
  IrreducibilityCertificate cert;

  static FieldPtr rationals();
  static FieldPtr prime(std::uint64_t p);
  /// Builds K[x]/(m). Throws ReduciblePolynomial / CannotCertify per the
  /// certification strategy; `trusted` accepts uncertified m with a trusted
  /// certificate.
  static FieldPtr extension(FieldPtr base, std::vector<Scalar> minpoly_monic,
                            bool trusted = false, const std::string& name = "");

  bool is_extension() const { return kind == Kind::extension; }
  /// Degree over the base field (1 for base fields).
  int degree() const { return deg; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long v) const;
  Scalar from_rat(const Rat& r) const;  // embeds via prime field
  /// The class of x in K[x]/(m); for degree-1 extensions this is the
  /// (negated) constant term. Error for base fields.
  Scalar generator() const;
  /// Embeds a base-field element into this field.
  Scalar embed(const Scalar& base_elt) const;
  /// Coordinates of a over the base field, length degree().
  std::vector<Scalar> coords(const Scalar& a) const;
  Scalar from_coords(const std::vector<Scalar>& cs) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar inv(const Scalar& a) const;  // DivisionByZero on 0
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
  Scalar pow(const Scalar& a, long e) const;

  bool same_field(const Field& o) const;

  /// "n" or "n/d" for base scalars, coordinate join "c0;c1;..." for
  /// extension scalars.
  std::string to_string(const Scalar& a) const;
  Scalar parse(const std::string& s) const;

 private:
  Field() = default;
  void check(const Scalar& a) const;
  // alpha^k for k in [deg, 2 deg - 2], reduced; filled for extensions
  std::vector<std::vector<Scalar>> pow_red_;
  friend std::vector<Scalar> ext_mul_coords(const Field& F,
                                            const std::vector<Scalar>& a,
                                            const std::vector<Scalar>& b);
};

inline Scalar operator+(const Scalar& a, const Scalar& b) { return a.field->add(a, b); }
inline Scalar operator-(const Scalar& a, const Scalar& b) { return a.field->sub(a, b); }
inline Scalar operator-(const Scalar& a) { return a.field->neg(a); }
inline Scalar operator*(const Scalar& a, const Scalar& b) { return a.field->mul(a, b); }

// ---- dense polynomials over a field (coeffs[i] is the x^i coefficient) ----

using Poly = std::vector<Scalar>;

Poly poly_trim(Poly p);
int poly_deg(const Poly& p);  // -1 for zero
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
/// Division with remainder; divisor's leading coefficient must be invertible.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_gcd_monic(Poly a, Poly b);
Scalar poly_eval(const Poly& p, const Scalar& x);

// ---- automorphisms ----

/// K-automorphism of a simple extension, determined by the image of the
/// generator (which must be a root of the minimal polynomial).
struct FieldAutomorphism {
  FieldPtr field;
  Scalar gen_image;

  Scalar apply(const Scalar& a) const;
  bool is_identity() const;
  bool operator==(const FieldAutomorphism& o) const;
};

struct AutomorphismGroup {
  FieldPtr field;
  std::vector<FieldAutomorphism> elements;  // identity first
  bool is_galois = false;

  int size() const { return (int)elements.size(); }
  const FieldAutomorphism& identity() const { return elements.front(); }
  /// Index of sigma∘tau in elements.
  int compose_index(int sigma, int tau) const;
  int inverse_index(int sigma) const;
  int index_of(const FieldAutomorphism& s) const;
};

FieldAutomorphism identity_automorphism(const FieldPtr& L);
FieldAutomorphism compose(const FieldAutomorphism& s, const FieldAutomorphism& t);

/// Computes the automorphism group. Frobenius powers over finite base;
/// {id, conjugation} for quadratics over Q; degree > 2 over Q requires a
/// user-supplied table of generator images (each verified to be a root of
/// the minimal polynomial) and throws UnsupportedTower otherwise.
AutomorphismGroup automorphism_group(
    const FieldPtr& L,
    const std::optional<std::vector<Scalar>>& user_images = std::nullopt);

// ---- F_p helpers (shared with matrix code) ----

std::uint64_t fp_add(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t fp_sub(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t fp_inv(std::uint64_t a, std::uint64_t p);
std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p);
bool is_prime_u64(std::uint64_t n);

}  // namespace scalex
