#pragma once

// Precision-tracked arithmetic in finite extensions of Q_p.
//
// A LocalField is a tower Q_p ⊂ K0 ⊂ K where K0 is unramified of degree f
// (defined by a fixed monic polynomial P with irreducible reduction mod p)
// and K/K0 is totally ramified of degree e (defined by an Eisenstein
// polynomial with coefficients in the ring of integers of K0).  Elements are
// stored as  x = p^shift * sum_{j<e, i<f} c_{ij} alpha^i pi^j  with integer
// coordinates c known modulo p^(prec - shift).  Because {alpha^i pi^j} is an
// integral basis, "known modulo p^prec" is the same as x + p^prec O_K.
//
// Elements built from integers are exact (prec == kExact) and stay exact
// under ring operations.  Everything else carries an absolute precision that
// is propagated pessimistically.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linv {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr long kExact = std::numeric_limits<long>::max() / 4;

/// Raised when an answer cannot be certified at the available precision.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what, long needed_digits = 0)
      : std::runtime_error(what), needed_(needed_digits) {}
  long needed_digits() const { return needed_; }

 private:
  long needed_;
};

/// Invalid field data: non-prime p, reducible or non-Eisenstein polynomial,
/// or mixing elements of different fields.
class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FieldElement;

class LocalField {
 public:
  /// eisenstein: coefficients a_0..a_{e-1} of x^e + ... + a_0, each given as
  /// f integer coordinates over the unramified step.  Empty means unramified.
  static std::shared_ptr<const LocalField> make(
      long p, int f0, const std::vector<std::vector<Integer>>& eisenstein,
      long precision);
  static std::shared_ptr<const LocalField> make(long p, int f0, long precision) {
    return make(p, f0, {}, precision);
  }

  long prime() const { return p_; }
  int unramified_degree() const { return f_; }
  int ramification_index() const { return e_; }
  int degree() const { return f_ * e_; }
  long precision() const { return precision_; }
  bool is_unramified() const { return e_ == 1; }
  /// Size q of the residue field.
  const Integer& residue_size() const { return q_; }
  Integer prime_power(long k) const;

  /// Coefficients c_0..c_{f-1} of the monic defining polynomial of K0.
  const std::vector<Integer>& unramified_poly() const { return unram_; }
  const std::vector<std::vector<Integer>>& eisenstein_poly() const { return eis_; }

  /// The unramified step K0 (this field itself when e == 1).
  std::shared_ptr<const LocalField> unramified_subfield() const;
  /// Q_p at the same precision.
  std::shared_ptr<const LocalField> base_field() const;
  /// Same defining data at another precision.
  std::shared_ptr<const LocalField> with_precision(long precision) const;

  bool same_as(const LocalField& other) const;
  std::string describe() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_integer(const Integer& n) const;
  FieldElement from_rational(const Rational& r) const;
  /// Root alpha of the unramified polynomial (1 when f == 1).
  FieldElement generator() const;
  /// Root pi of the Eisenstein polynomial (p when e == 1).
  FieldElement uniformizer() const;
  /// Element from raw coordinates (index j*f + i for alpha^i pi^j).
  FieldElement from_coords(long shift, long prec, std::vector<Integer> coords) const;

  /// Arithmetic Frobenius of K0, applied to the unramified coordinates.
  /// Requires x to lie in K0 (always true when e == 1).
  FieldElement frobenius(const FieldElement& x) const;

  // Raw ring arithmetic on integral coordinate vectors; modulus 0 = exact.
  std::vector<Integer> raw_mul(const std::vector<Integer>& a,
                               const std::vector<Integer>& b,
                               const Integer& modulus) const;
  std::vector<Integer> raw_mul_k0(const std::vector<Integer>& a,
                                  const std::vector<Integer>& b,
                                  const Integer& modulus) const;

 private:
  LocalField() = default;
  void init_frobenius();

  long p_ = 0;
  int f_ = 1;
  int e_ = 1;
  long precision_ = 0;
  Integer q_;
  std::vector<Integer> unram_;
  std::vector<std::vector<Integer>> eis_;
  std::shared_ptr<const LocalField> unram_sub_;  // null when e == 1
  std::shared_ptr<const LocalField> base_;       // null when degree 1
  std::vector<Integer> frob_alpha_;              // sigma(alpha) coords in K0
  long frob_prec_ = 0;
  std::weak_ptr<const LocalField> self_;

  friend class FieldElement;
};

using FieldPtr = std::shared_ptr<const LocalField>;

class FieldElement {
 public:
  /// Untyped exact zero; adopts the field of whatever it is combined with.
  FieldElement() = default;
  /// Untyped exact integer (used for Scalar(0)/Scalar(1) in dense kernels).
  FieldElement(int n) : small_(n) {}  // NOLINT(google-explicit-constructor)

  FieldElement(FieldPtr field, long shift, long prec, std::vector<Integer> coords);

  bool is_typed() const { return field_ != nullptr; }
  const FieldPtr& field() const { return field_; }
  bool is_exact() const { return !field_ || prec_ >= kExact; }
  /// x is known modulo p^absolute_precision().
  long absolute_precision() const { return field_ ? prec_ : kExact; }
  /// True when x is zero to its known precision.
  bool is_zero() const;
  bool is_exact_zero() const { return is_zero() && is_exact(); }

  /// Valuation in units of 1/e (so ord(pi) == 1).  Throws PrecisionError
  /// when x is indistinguishable from zero.
  long valuation_pi() const;
  /// Normalized valuation with ord(p) == 1.
  Rational valuation() const;
  /// floor of a lower bound on the valuation (in p-units).  For an inexact
  /// zero this is its absolute precision.
  long valuation_floor() const;
  /// Digits known beyond the valuation (kExact for exact elements).
  long relative_precision() const;

  long shift() const { return shift_; }
  const std::vector<Integer>& coords() const { return coords_; }
  /// Coordinates of x itself (shift folded in); requires shift >= 0.
  std::vector<Integer> integral_coords() const;

  /// Same value, absolute precision lowered to at most `prec`.
  FieldElement truncated(long prec) const;
  /// Same value reinterpreted in another field with identical defining data
  /// (used when precision is overridden).
  FieldElement in_field(FieldPtr other) const;
  /// Forget that an exact element is exact: relative precision capped at N.
  FieldElement capped() const;

  FieldElement inverse() const;
  FieldElement pow(long n) const;
  /// Exact division by a rational integer (n != 0).
  FieldElement divided_by(const Integer& n) const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  /// Equality to the common known precision (a - b is zero).
  bool agrees_with(const FieldElement& other) const;
  /// Number of agreeing p-adic digits, i.e. a lower bound for ord(a - b),
  /// capped by the common precision.
  long agreement_digits(const FieldElement& other) const;
  /// Same as agrees_with; needed by generic dense kernels.
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.agrees_with(b); }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !a.agrees_with(b); }

  std::string to_string() const;
  /// The same value as an element of f (identity when already typed).
  FieldElement typed_like(const FieldPtr& f) const;

 private:
  void normalize();
  long first_unit_block() const;

  FieldPtr field_;
  long shift_ = 0;
  long prec_ = kExact;
  std::vector<Integer> coords_;
  long small_ = 0;  // value when untyped
};

/// Lift of the residue of a unit to a (q-1)-th root of unity.
FieldElement teichmuller(const FieldElement& x);
/// A square root of x when one exists in the field (p odd, unramified).
std::optional<FieldElement> square_root(const FieldElement& x);
/// Iwasawa branch of the p-adic logarithm (log p = 0, kills roots of unity).
FieldElement iwasawa_log(const FieldElement& x);
/// Trace down to Q_p (element of field->base_field()).
FieldElement trace_to_base(const FieldElement& x);
/// Norm down to Q_p (element of field->base_field()).
FieldElement norm_to_base(const FieldElement& x);
/// Reinterpret an element of K lying in Q_p as an element of Q_p.
FieldElement restrict_to_base(const FieldElement& x);

Rational valuation(const FieldElement& x);

inline FieldPtr make_field(long p, int f0, const std::vector<std::vector<Integer>>& eisenstein,
                           long precision) {
  return LocalField::make(p, f0, eisenstein, precision);
}

/// Embedding of an unramified field E into the unramified step of K, fixed
/// by choosing a deterministic root of E's defining polynomial.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr source, FieldPtr target);
  FieldElement operator()(const FieldElement& x) const;
  const FieldPtr& source() const { return source_; }
  const FieldPtr& target() const { return target_; }

 private:
  FieldPtr source_;
  FieldPtr target_;
  std::vector<FieldElement> powers_;  // images of alpha_E^i in K
};

bool is_prime(long p);

/// Residue-field irreducibility of a monic polynomial over F_p (Rabin test).
bool irreducible_mod_p(const std::vector<Integer>& monic_low_coeffs, long p);

/// The checked-in defining polynomial for the unramified extension of degree f.
std::vector<Integer> unramified_polynomial(long p, int f);

}  // namespace linv
