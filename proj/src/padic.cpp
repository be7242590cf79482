#include "linv/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace linv {

namespace {

Integer power_of(long p, long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

Integer reduce(const Integer& a, const Integer& m) {
  if (m == 0) return a;
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long sat_add(long a, long b) {
  if (a >= kExact || b >= kExact) return kExact;
  return a + b;
}

bool divisible(const Integer& a, long p) {
  return mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

long vp_integer(const Integer& n, long p) {
  if (n == 0) return kExact;
  Integer t = n;
  long v = 0;
  while (divisible(t, p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

// ---- polynomials over F_p for the irreducibility test --------------------

using Poly = std::vector<long>;  // low to high

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long modp(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long inv_modp(long a, long p) {
  Integer r;
  Integer aa = a, pp = p;
  mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t());
  return r.get_si();
}

Poly poly_mod(Poly a, const Poly& m, long p) {
  trim(a);
  const long lead_inv = inv_modp(m.back(), p);
  while (a.size() >= m.size()) {
    const long c = modp(a.back() * lead_inv, p);
    const std::size_t off = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[off + i] = modp(a[off + i] - c * m[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = modp(r[i + j] + a[i] * b[j], p);
  return poly_mod(r, m, p);
}

Poly poly_powmod(Poly base, Integer e, const Poly& m, long p) {
  Poly r{1};
  base = poly_mod(base, m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return poly_mod(r, m, p);
}

Poly poly_gcd(Poly a, Poly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

const std::map<std::pair<long, int>, std::vector<long>>& conway_table() {
  // Conway polynomials x^f + c_{f-1} x^{f-1} + ... + c_0, stored as c_0..c_{f-1}.
  static const std::map<std::pair<long, int>, std::vector<long>> table = {
      {{2, 2}, {1, 1}},        {{2, 3}, {1, 1, 0}},     {{2, 4}, {1, 1, 0, 0}},
      {{3, 2}, {2, 2}},        {{3, 3}, {1, 2, 0}},     {{3, 4}, {2, 0, 0, 2}},
      {{5, 2}, {2, 4}},        {{5, 3}, {3, 3, 0}},     {{5, 4}, {2, 4, 4, 0}},
      {{7, 2}, {3, 6}},        {{7, 3}, {4, 0, 6}},     {{7, 4}, {3, 4, 5, 0}},
      {{11, 2}, {2, 7}},       {{11, 3}, {9, 2, 0}},    {{11, 4}, {2, 10, 8, 0}},
      {{13, 2}, {2, 12}},      {{13, 3}, {11, 2, 0}},   {{13, 4}, {2, 12, 3, 0}},
  };
  return table;
}

}  // namespace

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool irreducible_mod_p(const std::vector<Integer>& low, long p) {
  const long n = static_cast<long>(low.size());
  if (n <= 1) return true;
  Poly m(n + 1);
  for (long i = 0; i < n; ++i) m[i] = modp(Integer(low[i] % p).get_si(), p);
  m[n] = 1;
  const Poly x{0, 1};
  auto frob_iterate = [&](long k) { return poly_powmod(x, power_of(p, k), m, p); };
  Poly xq = frob_iterate(n);
  Poly diff = xq;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = modp(diff[1] - 1, p);
  trim(diff);
  if (!diff.empty()) return false;
  for (long r : prime_factors(n)) {
    Poly h = frob_iterate(n / r);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = modp(h[1] - 1, p);
    trim(h);
    Poly g = poly_gcd(m, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<Integer> unramified_polynomial(long p, int f) {
  if (f == 1) return {Integer(0)};
  auto it = conway_table().find({p, f});
  if (it != conway_table().end()) {
    std::vector<Integer> c(it->second.begin(), it->second.end());
    if (irreducible_mod_p(c, p)) return c;
  }
  // Deterministic fallback: first irreducible monic polynomial in
  // lexicographic order of (c_0, ..., c_{f-1}).
  std::vector<long> c(f, 0);
  for (;;) {
    int i = 0;
    while (i < f) {
      if (++c[i] < p) break;
      c[i] = 0;
      ++i;
    }
    if (i == f) throw FieldError("no irreducible polynomial found");
    std::vector<Integer> cand(c.begin(), c.end());
    if (c[0] != 0 && irreducible_mod_p(cand, p)) return cand;
  }
}

// ---------------------------------------------------------------------------
// LocalField

std::shared_ptr<const LocalField> LocalField::make(
    long p, int f0, const std::vector<std::vector<Integer>>& eisenstein, long precision) {
  if (!is_prime(p)) throw FieldError("p = " + std::to_string(p) + " is not prime");
  if (f0 < 1) throw FieldError("unramified degree must be >= 1");
  if (precision < 1) throw FieldError("precision must be >= 1");

  std::shared_ptr<LocalField> k(new LocalField());
  k->p_ = p;
  k->f_ = f0;
  k->precision_ = precision;
  k->q_ = power_of(p, f0);
  k->unram_ = unramified_polynomial(p, f0);
  if (!irreducible_mod_p(k->unram_, p))
    throw FieldError("unramified polynomial is reducible mod p");

  if (eisenstein.size() >= 2) {
    k->e_ = static_cast<int>(eisenstein.size());
    for (std::size_t j = 0; j < eisenstein.size(); ++j) {
      if (static_cast<int>(eisenstein[j].size()) > f0)
        throw FieldError("Eisenstein coefficient has too many coordinates");
      std::vector<Integer> c(eisenstein[j].begin(), eisenstein[j].end());
      c.resize(f0, 0);
      long v = kExact;
      for (const auto& x : c) v = std::min(v, vp_integer(x, p));
      if (j == 0 && v != 1)
        throw FieldError("not Eisenstein: constant term must have valuation exactly 1");
      if (j > 0 && v < 1)
        throw FieldError("not Eisenstein: coefficient " + std::to_string(j) +
                         " must be divisible by p");
      k->eis_.push_back(std::move(c));
    }
  } else if (eisenstein.size() == 1) {
    // x + a_0 defines no extension; accept only a valid Eisenstein constant.
    long v = kExact;
    for (const auto& x : eisenstein[0]) v = std::min(v, vp_integer(x, p));
    if (v != 1) throw FieldError("not Eisenstein: constant term must have valuation exactly 1");
  }
  if (k->e_ > 1) k->unram_sub_ = make(p, f0, {}, precision);
  if (k->degree() > 1) k->base_ = make(p, 1, {}, precision);
  std::shared_ptr<const LocalField> out = k;
  k->self_ = out;
  if (k->e_ == 1 && f0 > 1) k->init_frobenius();
  return out;
}

Integer LocalField::prime_power(long k) const { return power_of(p_, k); }

std::shared_ptr<const LocalField> LocalField::unramified_subfield() const {
  return e_ == 1 ? self_.lock() : unram_sub_;
}

std::shared_ptr<const LocalField> LocalField::base_field() const {
  return degree() == 1 ? self_.lock() : base_;
}

std::shared_ptr<const LocalField> LocalField::with_precision(long precision) const {
  return make(p_, f_, e_ > 1 ? eis_ : std::vector<std::vector<Integer>>{}, precision);
}

bool LocalField::same_as(const LocalField& o) const {
  return p_ == o.p_ && f_ == o.f_ && e_ == o.e_ && unram_ == o.unram_ && eis_ == o.eis_ &&
         precision_ == o.precision_;
}

std::string LocalField::describe() const {
  std::ostringstream os;
  os << "Q_" << p_;
  if (f_ > 1) os << "(unramified deg " << f_ << ")";
  if (e_ > 1) os << "(ramified e=" << e_ << ")";
  os << " @ " << precision_;
  return os.str();
}

FieldElement LocalField::zero() const {
  return FieldElement(self_.lock(), kExact, kExact, std::vector<Integer>(degree(), 0));
}

FieldElement LocalField::one() const { return from_integer(1); }

FieldElement LocalField::from_integer(const Integer& n) const {
  std::vector<Integer> c(degree(), 0);
  c[0] = n;
  return FieldElement(self_.lock(), 0, kExact, std::move(c));
}

FieldElement LocalField::from_rational(const Rational& r) const {
  Rational q = r;
  q.canonicalize();
  FieldElement num = from_integer(q.get_num());
  if (q.get_den() == 1) return num;
  return num * from_integer(q.get_den()).inverse();
}

FieldElement LocalField::generator() const {
  std::vector<Integer> c(degree(), 0);
  if (f_ == 1) {
    c[0] = 1;
  } else {
    c[1] = 1;
  }
  return FieldElement(self_.lock(), 0, kExact, std::move(c));
}

FieldElement LocalField::uniformizer() const {
  std::vector<Integer> c(degree(), 0);
  if (e_ == 1) {
    c[0] = p_;
  } else {
    c[f_] = 1;
  }
  return FieldElement(self_.lock(), 0, kExact, std::move(c));
}

FieldElement LocalField::from_coords(long shift, long prec, std::vector<Integer> coords) const {
  return FieldElement(self_.lock(), shift, prec, std::move(coords));
}

std::vector<Integer> LocalField::raw_mul_k0(const std::vector<Integer>& a,
                                            const std::vector<Integer>& b,
                                            const Integer& modulus) const {
  const int f = f_;
  if (f == 1) return {reduce(a[0] * b[0], modulus)};
  std::vector<Integer> t(2 * f - 1, 0);
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) t[i + j] += a[i] * b[j];
  }
  for (int k = 2 * f - 2; k >= f; --k) {
    if (t[k] == 0) continue;
    const Integer c = t[k];
    t[k] = 0;
    for (int i = 0; i < f; ++i) t[k - f + i] -= c * unram_[i];
  }
  t.resize(f);
  for (auto& x : t) x = reduce(x, modulus);
  return t;
}

std::vector<Integer> LocalField::raw_mul(const std::vector<Integer>& a,
                                         const std::vector<Integer>& b,
                                         const Integer& modulus) const {
  if (e_ == 1) return raw_mul_k0(a, b, modulus);
  const int f = f_, e = e_;
  auto block = [f](const std::vector<Integer>& v, int j) {
    return std::vector<Integer>(v.begin() + j * f, v.begin() + (j + 1) * f);
  };
  auto is_zero_block = [](const std::vector<Integer>& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
  };
  std::vector<std::vector<Integer>> t(2 * e - 1, std::vector<Integer>(f, 0));
  for (int ja = 0; ja < e; ++ja) {
    auto ba = block(a, ja);
    if (is_zero_block(ba)) continue;
    for (int jb = 0; jb < e; ++jb) {
      auto prod = raw_mul_k0(ba, block(b, jb), modulus);
      for (int i = 0; i < f; ++i) t[ja + jb][i] += prod[i];
    }
  }
  for (int k = 2 * e - 2; k >= e; --k) {
    if (is_zero_block(t[k])) continue;
    const auto c = t[k];
    std::fill(t[k].begin(), t[k].end(), Integer(0));
    for (int j = 0; j < e; ++j) {
      auto prod = raw_mul_k0(c, eis_[j], modulus);
      for (int i = 0; i < f; ++i) t[k - e + j][i] -= prod[i];
    }
  }
  std::vector<Integer> out;
  out.reserve(f * e);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) out.push_back(reduce(t[j][i], modulus));
  return out;
}

namespace {

std::vector<Integer> raw_pow(const LocalField& k, std::vector<Integer> base, Integer n,
                             const Integer& modulus, bool k0_only) {
  std::vector<Integer> r(base.size(), 0);
  r[0] = 1;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t()))
      r = k0_only ? k.raw_mul_k0(r, base, modulus) : k.raw_mul(r, base, modulus);
    n >>= 1;
    if (n > 0) base = k0_only ? k.raw_mul_k0(base, base, modulus) : k.raw_mul(base, base, modulus);
  }
  return r;
}

// Inverse of a unit modulo p^digits by residue inversion plus Newton.
std::vector<Integer> raw_inverse_unit(const LocalField& k, const std::vector<Integer>& u,
                                      long digits) {
  const int f = k.unramified_degree(), e = k.ramification_index();
  const Integer p = k.prime();
  std::vector<Integer> res(u.begin(), u.begin() + f);
  for (auto& x : res) x = reduce(x, p);
  auto r0 = raw_pow(k, res, k.residue_size() - 2, p, true);
  std::vector<Integer> z(f * e, 0);
  std::copy(r0.begin(), r0.end(), z.begin());
  const Integer mod = k.prime_power(digits);
  long iters = 2;
  for (long have = 1; have < e * digits; have *= 2) ++iters;
  for (long it = 0; it < iters; ++it) {
    auto uz = k.raw_mul(u, z, mod);
    for (auto& x : uz) x = -x;
    uz[0] += 2;
    auto nz = k.raw_mul(z, uz, mod);
    if (nz == z) break;
    z = std::move(nz);
  }
  return z;
}

}  // namespace

void LocalField::init_frobenius() {
  // sigma(alpha) is the root of P congruent to alpha^p; Newton-lift it.
  frob_prec_ = precision_ + 16;
  const Integer mod = prime_power(frob_prec_);
  std::vector<Integer> alpha(f_, 0);
  alpha[1] = 1;
  std::vector<Integer> beta = raw_pow(*this, alpha, p_, mod, true);
  auto eval = [&](const std::vector<Integer>& x, bool derivative) {
    // Horner on P (monic, degree f) or P'.
    std::vector<Integer> acc(f_, 0);
    if (!derivative) {
      acc[0] = 1;
      for (int i = f_ - 1; i >= 0; --i) {
        acc = raw_mul_k0(acc, x, mod);
        acc[0] = reduce(acc[0] + unram_[i], mod);
      }
    } else {
      acc[0] = f_;
      for (int i = f_ - 1; i >= 1; --i) {
        acc = raw_mul_k0(acc, x, mod);
        acc[0] = reduce(acc[0] + Integer(i) * unram_[i], mod);
      }
    }
    return acc;
  };
  for (int it = 0; it < 64; ++it) {
    auto val = eval(beta, false);
    if (std::all_of(val.begin(), val.end(), [](const Integer& x) { return x == 0; })) break;
    auto d = eval(beta, true);
    auto dinv = raw_inverse_unit(*this, d, frob_prec_);
    auto step = raw_mul_k0(val, dinv, mod);
    for (int i = 0; i < f_; ++i) beta[i] = reduce(beta[i] - step[i], mod);
  }
  frob_alpha_ = beta;
}

FieldElement LocalField::frobenius(const FieldElement& x0) const {
  FieldElement x = x0.is_typed() ? x0 : from_integer(0) + x0;
  if (f_ == 1) return x;
  if (e_ > 1) {
    const auto& c = x.coords();
    for (int i = f_; i < degree(); ++i)
      if (c[i] != 0) throw FieldError("frobenius: element is not in the unramified step");
    std::vector<Integer> k0(c.begin(), c.begin() + f_);
    FieldElement y = unram_sub_->frobenius(
        FieldElement(unram_sub_, x.shift(), x.absolute_precision(), k0));
    std::vector<Integer> back(degree(), 0);
    std::copy(y.coords().begin(), y.coords().end(), back.begin());
    return FieldElement(self_.lock(), y.shift(), y.absolute_precision(), back);
  }
  if (x.is_zero()) return x;
  const long prec = std::min(x.absolute_precision(), sat_add(x.shift(), frob_prec_));
  const long digits = std::min(prec - x.shift(), frob_prec_);
  const Integer mod = prime_power(digits);
  std::vector<Integer> acc(f_, 0);
  std::vector<Integer> bp(f_, 0);
  bp[0] = 1;
  for (int i = 0; i < f_; ++i) {
    const Integer& c = x.coords()[i];
    if (c != 0)
      for (int j = 0; j < f_; ++j) acc[j] += c * bp[j];
    if (i + 1 < f_) bp = raw_mul_k0(bp, frob_alpha_, mod);
  }
  for (auto& a : acc) a = reduce(a, mod);
  return FieldElement(self_.lock(), x.shift(), prec, std::move(acc));
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(FieldPtr field, long shift, long prec, std::vector<Integer> coords)
    : field_(std::move(field)), shift_(shift), prec_(prec), coords_(std::move(coords)) {
  if (!field_) throw FieldError("element needs a field");
  coords_.resize(field_->degree(), 0);
  normalize();
}

void FieldElement::normalize() {
  const long p = field_->prime();
  if (prec_ < kExact) {
    if (shift_ >= prec_) {
      std::fill(coords_.begin(), coords_.end(), Integer(0));
      shift_ = prec_;
      return;
    }
    const Integer mod = field_->prime_power(prec_ - shift_);
    for (auto& c : coords_) c = reduce(c, mod);
  }
  if (std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return c == 0; })) {
    shift_ = prec_;
    return;
  }
  while (std::all_of(coords_.begin(), coords_.end(),
                     [p](const Integer& c) { return divisible(c, p); })) {
    for (auto& c : coords_)
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
    ++shift_;
  }
}

bool FieldElement::is_zero() const {
  if (!field_) return small_ == 0;
  return std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return c == 0; });
}

long FieldElement::first_unit_block() const {
  const int f = field_->unramified_degree(), e = field_->ramification_index();
  const long p = field_->prime();
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i)
      if (!divisible(coords_[j * f + i], p)) return j;
  return e;  // unreachable for normalized nonzero elements
}

long FieldElement::valuation_pi() const {
  if (!field_) throw FieldError("valuation of an untyped constant");
  if (is_zero())
    throw PrecisionError("precision exhausted: element is zero to O(p^" +
                             std::to_string(prec_) + ")",
                         prec_);
  return shift_ * field_->ramification_index() + first_unit_block();
}

Rational FieldElement::valuation() const {
  Rational r(valuation_pi(), field_->ramification_index());
  r.canonicalize();
  return r;
}

long FieldElement::valuation_floor() const {
  if (!field_) return small_ == 0 ? kExact : 0;
  if (is_zero()) return prec_;
  return floor_div(valuation_pi(), field_->ramification_index());
}

long FieldElement::relative_precision() const {
  if (is_exact()) return kExact;
  if (is_zero()) return 0;
  return prec_ - ceil_div(valuation_pi(), field_->ramification_index());
}

std::vector<Integer> FieldElement::integral_coords() const {
  if (shift_ < 0) throw FieldError("element is not integral");
  std::vector<Integer> out = coords_;
  if (is_zero()) return out;
  const Integer s = field_->prime_power(shift_);
  for (auto& c : out) c *= s;
  return out;
}

FieldElement FieldElement::typed_like(const FieldPtr& f) const {
  if (field_) return *this;
  return f->from_integer(small_);
}

FieldElement FieldElement::truncated(long prec) const {
  if (!field_) return *this;
  if (prec >= prec_) return *this;
  return FieldElement(field_, shift_, prec, coords_);
}

FieldElement FieldElement::in_field(FieldPtr other) const {
  if (!field_) return *this;
  if (other->prime() != field_->prime() || other->degree() != field_->degree() ||
      other->unramified_poly() != field_->unramified_poly() ||
      other->eisenstein_poly() != field_->eisenstein_poly())
    throw FieldError("in_field: incompatible defining data");
  return FieldElement(std::move(other), shift_, prec_, coords_);
}

FieldElement FieldElement::capped() const {
  if (!field_ || !is_exact() || is_zero()) return *this;
  return truncated(valuation_floor() + field_->precision());
}

FieldElement FieldElement::operator-() const {
  if (!field_) return FieldElement(static_cast<int>(-small_));
  std::vector<Integer> c = coords_;
  for (auto& x : c) x = -x;
  return FieldElement(field_, shift_, prec_, std::move(c));
}

namespace {

void check_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field().get() != b.field().get() && !a.field()->same_as(*b.field()))
    throw FieldError("arithmetic between elements of different fields: " +
                     a.field()->describe() + " vs " + b.field()->describe());
}

}  // namespace

FieldElement& FieldElement::operator+=(const FieldElement& o0) {
  if (!field_ && !o0.field_) {
    small_ += o0.small_;
    return *this;
  }
  FieldElement o = o0.field_ ? o0 : o0.typed_like(field_);
  if (!field_) *this = typed_like(o.field_);
  check_same_field(*this, o);
  const long prec = std::min(prec_, o.prec_);
  if (o.is_zero()) {
    *this = truncated(prec);
    return *this;
  }
  if (is_zero()) {
    *this = o.truncated(prec);
    return *this;
  }
  const long s = std::min(shift_, o.shift_);
  if (prec < kExact && s >= prec) {
    *this = FieldElement(field_, prec, prec, std::vector<Integer>(coords_.size(), 0));
    return *this;
  }
  const long p = field_->prime();
  std::vector<Integer> c(coords_.size());
  const Integer sa = power_of(p, shift_ - s), sb = power_of(p, o.shift_ - s);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] * sa + o.coords_[i] * sb;
  *this = FieldElement(field_, s, prec, std::move(c));
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) { return *this += -o; }

FieldElement& FieldElement::operator*=(const FieldElement& o0) {
  if (!field_ && !o0.field_) {
    small_ *= o0.small_;
    return *this;
  }
  FieldElement o = o0.field_ ? o0 : o0.typed_like(field_);
  if (!field_) *this = typed_like(o.field_);
  check_same_field(*this, o);
  const long e = field_->ramification_index();
  if (is_exact() && o.is_exact()) {
    if (is_zero() || o.is_zero()) {
      *this = field_->zero();
      return *this;
    }
    *this = FieldElement(field_, shift_ + o.shift_, kExact,
                         field_->raw_mul(coords_, o.coords_, Integer(0)));
    return *this;
  }
  // Lower bounds on valuations in pi-units.
  auto vbound = [e](const FieldElement& x) -> long {
    if (x.is_zero()) return x.prec_ >= kExact ? kExact : x.prec_ * e;
    return x.valuation_pi();
  };
  const long va = vbound(*this), vb = vbound(o);
  long prec_pi = kExact;
  if (!is_exact()) prec_pi = std::min(prec_pi, sat_add(prec_ * e, vb));
  if (!o.is_exact()) prec_pi = std::min(prec_pi, sat_add(o.prec_ * e, va));
  const long prec = prec_pi >= kExact ? kExact : floor_div(prec_pi, e);
  if (is_zero() || o.is_zero()) {
    *this = FieldElement(field_, prec, prec, std::vector<Integer>(coords_.size(), 0));
    return *this;
  }
  const long shift = shift_ + o.shift_;
  if (shift >= prec) {
    *this = FieldElement(field_, prec, prec, std::vector<Integer>(coords_.size(), 0));
    return *this;
  }
  const Integer mod = field_->prime_power(prec - shift);
  *this = FieldElement(field_, shift, prec, field_->raw_mul(coords_, o.coords_, mod));
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  if (!field_ && !o.field_) throw FieldError("division of untyped constants");
  FieldElement oo = o.field_ ? o : o.typed_like(field_);
  return *this *= oo.inverse();
}

FieldElement FieldElement::inverse() const {
  if (!field_) throw FieldError("inverse of an untyped constant");
  if (is_zero())
    throw PrecisionError("cannot invert: element is zero to O(p^" + std::to_string(prec_) + ")",
                         prec_);
  const int f = field_->unramified_degree(), e = field_->ramification_index();
  const long vpi = valuation_pi();
  const long j0 = first_unit_block();
  long prec;
  if (is_exact()) {
    prec = floor_div(-vpi + field_->precision() * e, e);
  } else {
    prec = floor_div(prec_ * e - 2 * vpi, e);
  }
  const long rshift = -shift_ - (j0 > 0 ? 1 : 0);
  const long digits = std::max<long>(prec - rshift, 1) + 1;
  std::vector<Integer> u = coords_;
  std::vector<Integer> pipow(f * e, 0);
  if (j0 > 0) {
    pipow[(e - j0) * f] = 1;
    u = field_->raw_mul(u, pipow, Integer(0));
    for (auto& c : u)
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(field_->prime()));
  }
  auto r = raw_inverse_unit(*field_, u, digits);
  if (j0 > 0) r = field_->raw_mul(r, pipow, field_->prime_power(digits));
  return FieldElement(field_, rshift, prec, std::move(r));
}

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement base = *this;
  FieldElement r = field_ ? field_->one() : FieldElement(1);
  while (n > 0) {
    if (n & 1) r *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return r;
}

FieldElement FieldElement::divided_by(const Integer& n) const {
  if (n == 0) throw FieldError("division by zero integer");
  if (!field_) throw FieldError("division of an untyped constant");
  const long p = field_->prime();
  Integer m = n;
  long k = 0;
  while (divisible(m, p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++k;
  }
  if (is_zero()) {
    const long prec = prec_ >= kExact ? kExact : prec_ - k;
    return FieldElement(field_, prec, prec, coords_);
  }
  if (is_exact() && (m == 1 || m == -1)) {
    std::vector<Integer> c = coords_;
    if (m == -1)
      for (auto& x : c) x = -x;
    return FieldElement(field_, shift_ - k, kExact, std::move(c));
  }
  FieldElement x = capped();
  const Integer mod = field_->prime_power(x.prec_ - x.shift_);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), mod.get_mpz_t());
  std::vector<Integer> c = x.coords_;
  for (auto& y : c) y = reduce(y * inv, mod);
  return FieldElement(field_, x.shift_ - k, x.prec_ - k, std::move(c));
}

bool FieldElement::agrees_with(const FieldElement& other) const {
  return (*this - other).is_zero();
}

long FieldElement::agreement_digits(const FieldElement& other) const {
  FieldElement d = *this - other;
  if (!d.field_) return d.small_ == 0 ? kExact : 0;
  return d.valuation_floor();
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  if (!field_) {
    os << small_;
    return os.str();
  }
  const long p = field_->prime();
  if (is_zero()) {
    if (is_exact()) return "0";
    os << "O(" << p << "^" << prec_ << ")";
    return os.str();
  }
  if (field_->degree() == 1) {
    os << coords_[0].get_str();
  } else {
    os << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? ", " : "") << coords_[i].get_str();
    os << ")";
  }
  if (shift_ != 0) os << "*" << p << "^" << shift_;
  if (!is_exact()) os << " + O(" << p << "^" << prec_ << ")";
  return os.str();
}

Rational valuation(const FieldElement& x) { return x.valuation(); }

// ---------------------------------------------------------------------------
// Teichmuller, logarithm, trace, norm

FieldElement teichmuller(const FieldElement& x) {
  if (!x.is_typed()) throw FieldError("teichmuller of an untyped constant");
  const auto& k = x.field();
  if (x.is_zero() || x.valuation_pi() != 0) throw FieldError("teichmuller: input is not a unit");
  const int f = k->unramified_degree();
  const Integer p = k->prime();
  std::vector<Integer> t(x.coords().begin(), x.coords().begin() + f);
  for (auto& c : t) c = reduce(c, p);
  const long n = k->precision();
  const Integer mod = k->prime_power(n);
  for (long it = 0; it <= n + 1; ++it) {
    auto next = raw_pow(*k, t, k->residue_size(), mod, true);
    if (next == t) break;
    t = std::move(next);
  }
  std::vector<Integer> c(k->degree(), 0);
  std::copy(t.begin(), t.end(), c.begin());
  return k->from_coords(0, n, std::move(c));
}

std::optional<FieldElement> square_root(const FieldElement& x) {
  if (!x.is_typed()) throw FieldError("square root of an untyped constant");
  const auto& k = x.field();
  if (k->prime() == 2 || k->ramification_index() != 1)
    throw FieldError("square_root: only odd p and unramified fields are supported");
  if (x.is_zero()) return x;
  const long v = x.valuation_pi();
  if (v % 2 != 0) return std::nullopt;
  const FieldElement pv = k->from_integer(k->prime_power(v < 0 ? -v : v));
  const FieldElement u = v >= 0 ? x / pv : x * pv;
  // Residue root by search; q is small for the fields in use.
  const int f = k->unramified_degree();
  const long p = k->prime();
  const Integer q = k->residue_size();
  std::optional<FieldElement> y;
  std::vector<Integer> digits(k->degree(), 0);
  for (Integer n = 1; n < q && !y; ++n) {
    Integer m = n;
    for (int i = 0; i < f; ++i) {
      digits[i] = m % p;
      m /= p;
    }
    const FieldElement c = k->from_coords(0, kExact, digits);
    const FieldElement diff = c * c - u;
    if (diff.is_zero() || diff.valuation_floor() >= 1) y = c;
  }
  if (!y) return std::nullopt;
  const long target = std::min(u.absolute_precision(), k->precision());
  FieldElement r = y->truncated(target);
  for (long known = 1; known < 2 * target + 2; known *= 2) r = (r + u / r).divided_by(2);
  const FieldElement half = k->from_integer(k->prime_power(std::labs(v) / 2));
  return v >= 0 ? r * half : r / half;
}

FieldElement iwasawa_log(const FieldElement& x) {
  if (!x.is_typed()) throw FieldError("log of an untyped constant");
  const auto& k = x.field();
  if (x.is_zero())
    throw PrecisionError("log of an element indistinguishable from zero",
                         x.absolute_precision());
  const long p = k->prime();
  const long e = k->ramification_index();
  const long n_field = k->precision();
  const long vpi = x.valuation_pi();
  const long rel_pi = x.is_exact() ? kExact : x.absolute_precision() * e - vpi;
  if (rel_pi < kExact && rel_pi * (p - 1) <= e)
    throw PrecisionError("requested precision unreachable: too few digits for the log series",
                         n_field);
  const long target = x.is_exact() ? n_field : std::min(n_field, floor_div(rel_pi, e));
  long guard = 8 + 2 * e;
  for (long t = e * (p - 1); t > 1; t /= p) ++guard;
  const long internal = target + guard;

  // Representative treated as known to `internal` relative digits.
  const long vfloor = floor_div(vpi, e);
  FieldElement xl = k->from_coords(x.shift(), vfloor + internal + 1, x.coords());

  // u = x^e / p^vpi is a unit; u^(q-1) is a principal unit.
  FieldElement y = xl.pow(e);
  FieldElement u = k->from_coords(y.shift() - vpi, y.absolute_precision() - vpi, y.coords());
  const Integer q1 = k->residue_size() - 1;
  FieldElement u1 = u.pow(q1.get_si());
  FieldElement z = u1 - k->one();
  long powers = 0;
  while (!z.is_zero() && z.valuation_pi() * (p - 1) <= e) {
    u1 = u1.pow(p);
    ++powers;
    z = u1 - k->one();
  }
  FieldElement sum = k->zero().truncated(internal);
  if (!z.is_zero()) {
    const double w = static_cast<double>(z.valuation_pi()) / static_cast<double>(e);
    const double lp = std::log(static_cast<double>(p));
    FieldElement zn = z;
    for (long n = 1;; ++n) {
      FieldElement term = zn.divided_by(n);
      if (n % 2 == 0) term = -term;
      sum += term;
      const double next = static_cast<double>(n + 1);
      const double bound = next * w - std::log(next) / lp;
      if (bound > static_cast<double>(sum.absolute_precision()) + 1 &&
          next > 1.0 / (w * lp) + 1)
        break;
      zn *= z;
    }
  }
  Integer denom = q1 * e;
  denom *= k->prime_power(powers);
  return sum.divided_by(denom).truncated(target);
}

namespace {

FieldElement to_k0(const FieldPtr& k0, const FieldElement& x, int block) {
  const int f = k0->unramified_degree();
  std::vector<Integer> c(x.coords().begin() + block * f, x.coords().begin() + (block + 1) * f);
  if (x.is_zero()) return FieldElement(k0, x.absolute_precision(), x.absolute_precision(), c);
  return FieldElement(k0, x.shift(), x.absolute_precision(), std::move(c));
}

FieldElement k0_to_base(const FieldElement& t) { return restrict_to_base(t); }

FieldElement det_small(std::vector<std::vector<FieldElement>> m) {
  const std::size_t n = m.size();
  FieldElement det = m[0][0].field()->one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    long best = kExact;
    for (std::size_t r = c; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      const long v = m[r][c].valuation_pi();
      if (v < best) {
        best = v;
        piv = r;
      }
    }
    if (piv == n) return m[0][0].field()->zero();
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    const FieldElement inv = m[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_exact_zero()) continue;
      const FieldElement factor = m[r][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[r][j] -= factor * m[c][j];
    }
  }
  return det;
}

}  // namespace

FieldElement restrict_to_base(const FieldElement& x) {
  if (!x.is_typed()) throw FieldError("restrict_to_base of an untyped constant");
  const auto& k = x.field();
  const auto base = k->base_field();
  if (k->degree() == 1) return x;
  for (int i = 1; i < k->degree(); ++i)
    if (x.coords()[i] != 0) throw FieldError("element does not lie in Q_p: " + x.to_string());
  if (x.is_zero())
    return FieldElement(base, x.absolute_precision(), x.absolute_precision(), {Integer(0)});
  return FieldElement(base, x.shift(), x.absolute_precision(), {x.coords()[0]});
}

FieldElement trace_to_base(const FieldElement& x0) {
  if (!x0.is_typed()) throw FieldError("trace of an untyped constant");
  const auto& k = x0.field();
  const auto k0 = k->unramified_subfield();
  const int e = k->ramification_index();
  FieldElement t = k0->zero();
  FieldElement pij = k->one();
  const FieldElement pi = k->uniformizer();
  for (int j = 0; j < e; ++j) {
    t += to_k0(k0, x0 * pij, j);
    pij *= pi;
  }
  FieldElement sum = k0->zero();
  FieldElement c = t;
  for (int i = 0; i < k0->unramified_degree(); ++i) {
    sum += c;
    c = k0->frobenius(c);
  }
  return k0_to_base(sum);
}

FieldElement norm_to_base(const FieldElement& x) {
  if (!x.is_typed()) throw FieldError("norm of an untyped constant");
  const auto& k = x.field();
  const auto k0 = k->unramified_subfield();
  const int e = k->ramification_index();
  FieldElement nk0 = k0->one();
  if (e == 1) {
    nk0 = x;
  } else {
    // Matrix of multiplication by x on the basis 1, pi, ..., pi^(e-1).
    std::vector<std::vector<FieldElement>> m(e, std::vector<FieldElement>(e));
    FieldElement pij = k->one();
    const FieldElement pi = k->uniformizer();
    for (int j = 0; j < e; ++j) {
      FieldElement col = x * pij;
      for (int i = 0; i < e; ++i) m[i][j] = to_k0(k0, col, i);
      pij *= pi;
    }
    nk0 = det_small(std::move(m));
  }
  FieldElement prod = k0->one();
  FieldElement c = nk0;
  for (int i = 0; i < k0->unramified_degree(); ++i) {
    prod *= c;
    c = k0->frobenius(c);
  }
  return k0_to_base(prod);
}

// ---------------------------------------------------------------------------
// FieldEmbedding

FieldEmbedding::FieldEmbedding(FieldPtr source, FieldPtr target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_->prime() != target_->prime())
    throw FieldError("embedding between fields of different residue characteristic");
  if (!source_->is_unramified()) throw FieldError("embedding source must be unramified");
  const int fs = source_->unramified_degree();
  const auto k0 = target_->unramified_subfield();
  const int ft = k0->unramified_degree();
  if (ft % fs != 0)
    throw FieldError("E (degree " + std::to_string(fs) +
                     ") does not embed in the coefficient field (unramified degree " +
                     std::to_string(ft) + ")");
  auto lift = [&](const FieldElement& b) {
    std::vector<Integer> c(target_->degree(), 0);
    std::copy(b.coords().begin(), b.coords().end(), c.begin());
    if (b.is_zero()) return target_->zero();
    return target_->from_coords(b.shift(), b.absolute_precision(), std::move(c));
  };
  FieldElement beta = k0->one();
  if (fs > 1) {
    if (fs == ft && source_->unramified_poly() == k0->unramified_poly()) {
      beta = k0->generator();
    } else {
      const long p = source_->prime();
      const auto& poly = source_->unramified_poly();
      const Integer pm = p;
      std::vector<Integer> r(ft, 0);
      bool found = false;
      for (;;) {
        std::vector<Integer> acc(ft, 0);
        acc[0] = 1;
        for (int i = fs - 1; i >= 0; --i) {
          acc = k0->raw_mul_k0(acc, r, pm);
          acc[0] = reduce(acc[0] + poly[i], pm);
        }
        if (std::all_of(acc.begin(), acc.end(), [](const Integer& c) { return c == 0; })) {
          found = true;
          break;
        }
        int i = 0;
        while (i < ft) {
          r[i] += 1;
          if (r[i] < p) break;
          r[i] = 0;
          ++i;
        }
        if (i == ft) break;
      }
      if (!found) throw FieldError("no root of E's polynomial in the residue field");
      beta = k0->from_coords(0, k0->precision() + 8, r);
      auto eval = [&](const FieldElement& b, bool deriv) {
        FieldElement acc = deriv ? k0->from_integer(fs) : k0->one();
        for (int i = fs - 1; i >= (deriv ? 1 : 0); --i) {
          acc *= b;
          acc += k0->from_integer(deriv ? Integer(i) * poly[i] : poly[i]);
        }
        return acc;
      };
      for (int it = 0; it < 64; ++it) {
        FieldElement v = eval(beta, false);
        if (v.is_zero()) break;
        beta -= v * eval(beta, true).inverse();
      }
    }
  }
  FieldElement bp = k0->one();
  for (int i = 0; i < fs; ++i) {
    powers_.push_back(lift(bp));
    bp *= beta;
  }
}

FieldElement FieldEmbedding::operator()(const FieldElement& x) const {
  if (!x.is_typed()) return x;
  if (x.field()->prime() != source_->prime() ||
      x.field()->unramified_degree() != source_->unramified_degree() || !x.field()->is_unramified())
    throw FieldError("embedding applied to an element of the wrong field");
  if (x.is_zero()) {
    const long a = x.absolute_precision();
    return a >= kExact ? target_->zero() : target_->zero().truncated(a);
  }
  FieldElement acc = target_->zero();
  for (int i = 0; i < source_->unramified_degree(); ++i) {
    const Integer& c = x.coords()[i];
    if (c != 0) acc += target_->from_integer(c) * powers_[i];
  }
  FieldElement shifted =
      acc.is_zero() ? acc
                    : target_->from_coords(acc.shift() + x.shift(),
                                           acc.absolute_precision() >= kExact
                                               ? kExact
                                               : acc.absolute_precision() + x.shift(),
                                           acc.coords());
  return shifted.truncated(x.absolute_precision());
}

}  // namespace linv
