#include <random>

#include "doctest.h"
#include "linv/padic.hpp"

using namespace linv;

namespace {

// Independent log oracle on Z_p units: plain integer series for
// log(x^(p-1)) / (p-1) reduced mod p^m.
Integer oracle_log(const Integer& x, long p, long m) {
  Integer pm;
  mpz_ui_pow_ui(pm.get_mpz_t(), p, m + 20);
  Integer z;
  Integer pp = p - 1;
  mpz_powm(z.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), pm.get_mpz_t());
  z -= 1;
  Integer sum = 0;
  Integer zn = z;
  for (long n = 1; n < 4 * (m + 20); ++n) {
    long v = 0;
    long nn = n;
    while (nn % p == 0) {
      nn /= p;
      ++v;
    }
    Integer pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), p, v);
    Integer t = zn / pv;  // zn divisible by p^n, n > v
    Integer inv, nnz = nn;
    mpz_invert(inv.get_mpz_t(), nnz.get_mpz_t(), pm.get_mpz_t());
    t = t * inv;
    sum += (n % 2 == 1) ? t : Integer(-t);
    sum %= pm;
    zn = (zn * z) % pm;
  }
  Integer inv, d = p - 1;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), pm.get_mpz_t());
  Integer pmm;
  mpz_ui_pow_ui(pmm.get_mpz_t(), p, m);
  Integer r = (sum * inv) % pmm;
  if (r < 0) r += pmm;
  return r;
}

Integer value_mod(const FieldElement& x, long m) {
  auto c = x.integral_coords();
  Integer pm;
  mpz_ui_pow_ui(pm.get_mpz_t(), x.field()->prime(), m);
  Integer r = c[0] % pm;
  if (r < 0) r += pm;
  return r;
}

}  // namespace

TEST_CASE("table polynomials are irreducible") {
  for (long p : {2, 3, 5, 7, 11, 13})
    for (int f : {2, 3, 4}) {
      auto c = unramified_polynomial(p, f);
      CHECK(c.size() == static_cast<std::size_t>(f));
      CHECK(irreducible_mod_p(c, p));
    }
  CHECK_FALSE(irreducible_mod_p({Integer(1), Integer(0)}, 5));  // x^2 + 1 = (x-2)(x-3)
  CHECK(irreducible_mod_p({Integer(1), Integer(0)}, 7));
  // Fallback search for a degree missing from the table.
  auto c = unramified_polynomial(17, 2);
  CHECK(irreducible_mod_p(c, 17));
}

TEST_CASE("field construction rejects bad data") {
  CHECK_THROWS_AS(LocalField::make(6, 1, 10), FieldError);
  CHECK_THROWS_AS(LocalField::make(3, 1, {{Integer(9)}, {Integer(0)}}, 10), FieldError);
  CHECK_THROWS_AS(LocalField::make(3, 1, {{Integer(3)}, {Integer(1)}}, 10), FieldError);
  CHECK_NOTHROW(LocalField::make(3, 1, {{Integer(-3)}, {Integer(0)}}, 10));
}

TEST_CASE("teichmuller representative of 2 in Z_5") {
  auto k = LocalField::make(5, 1, 4);
  auto t = teichmuller(k->from_integer(2));
  CHECK(value_mod(t, 4) == 182);
  CHECK(t.absolute_precision() == 4);
  auto k2 = LocalField::make(7, 3, 12);
  auto x = k2->generator() + k2->from_integer(3);
  auto tx = teichmuller(x);
  CHECK(tx.pow(342).agrees_with(k2->one()));
  CHECK((tx - x).valuation_floor() >= 1);
}

TEST_CASE("precision bookkeeping") {
  auto k = LocalField::make(5, 1, 20);
  auto a = k->from_integer(7).truncated(10);
  auto b = k->from_integer(25);  // exact, valuation 2
  CHECK((a * b).absolute_precision() == 12);
  CHECK((a + b).absolute_precision() == 10);
  auto c = k->from_integer(5).truncated(10);
  CHECK((a * c).absolute_precision() == 10);
  CHECK(k->from_integer(5).inverse().valuation_floor() == -1);
  CHECK((k->from_integer(3) * k->from_integer(3).inverse()).agrees_with(k->one()));
  auto z = k->zero().truncated(5);
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_exact());
  CHECK_THROWS_AS(z.valuation_pi(), PrecisionError);
  CHECK_THROWS_AS(z.inverse(), PrecisionError);
  CHECK(k->from_integer(50).divided_by(10).agrees_with(k->from_integer(5)));
  CHECK(k->from_integer(1).divided_by(3).valuation_floor() == 0);
}

TEST_CASE("ramified arithmetic") {
  // Q_3(sqrt 3), and an Eisenstein extension of the unramified quadratic.
  auto k = LocalField::make(3, 1, {{Integer(-3)}, {Integer(0)}}, 15);
  auto pi = k->uniformizer();
  CHECK(pi.valuation() == Rational(1, 2));
  CHECK((pi * pi).agrees_with(k->from_integer(3)));
  CHECK(norm_to_base(pi).agrees_with(k->base_field()->from_integer(-3)));
  CHECK(trace_to_base(k->one()).agrees_with(k->base_field()->from_integer(2)));
  auto x = pi + k->from_integer(2);
  CHECK((x * x.inverse()).agrees_with(k->one()));
  auto y = pi * pi * pi;
  CHECK(y.inverse().valuation() == Rational(-3, 2));
  CHECK((y * y.inverse()).agrees_with(k->one()));

  auto k2 = LocalField::make(5, 2, {{Integer(5), Integer(5)}, {Integer(0), Integer(5)}}, 12);
  CHECK(k2->degree() == 4);
  auto g = k2->generator() + k2->uniformizer();
  CHECK((g * g.inverse()).agrees_with(k2->one()));
  CHECK(trace_to_base(k2->one()).agrees_with(k2->base_field()->from_integer(4)));
}

TEST_CASE("frobenius") {
  auto k = LocalField::make(7, 3, 15);
  auto a = k->generator();
  auto s = k->frobenius(a);
  // sigma(alpha) is a root of the defining polynomial, congruent to alpha^7.
  const auto& c = k->unramified_poly();
  FieldElement v = s * s * s + k->from_integer(c[2]) * s * s + k->from_integer(c[1]) * s +
                   k->from_integer(c[0]);
  CHECK(v.is_zero());
  CHECK((s - a.pow(7)).valuation_floor() >= 1);
  CHECK(k->frobenius(k->frobenius(k->frobenius(a))).agrees_with(a));
  auto x = a * a + k->from_integer(4);
  CHECK(k->frobenius(x * a).agrees_with(k->frobenius(x) * s));
}

TEST_CASE("log against an integer-series oracle") {
  std::mt19937_64 rng(11);
  for (long p : {3, 5, 7, 11}) {
    auto k = LocalField::make(p, 1, 30);
    for (int i = 0; i < 20; ++i) {
      Integer x = static_cast<long>(rng() % 100000) * p + 1 + static_cast<long>(rng() % (p - 1));
      auto l = iwasawa_log(k->from_integer(x));
      CHECK(l.absolute_precision() == 30);
      CHECK(value_mod(l, 30) == oracle_log(x, p, 30));
    }
  }
}

TEST_CASE("log identities") {
  auto k = LocalField::make(5, 2, 25);
  auto a = k->generator() + k->from_integer(2);
  auto b = k->generator() * k->from_integer(3) + k->from_integer(5);
  CHECK(iwasawa_log(a * b).agrees_with(iwasawa_log(a) + iwasawa_log(b)));
  CHECK(iwasawa_log(k->from_integer(5)).is_zero());
  CHECK(iwasawa_log(teichmuller(a)).is_zero());
  CHECK(iwasawa_log(a.inverse()).agrees_with(-iwasawa_log(a)));
  // log N(x) = Tr log x
  CHECK(iwasawa_log(norm_to_base(b)).agrees_with(trace_to_base(iwasawa_log(b))));

  auto kr = LocalField::make(3, 1, {{Integer(-3)}, {Integer(0)}}, 20);
  auto x = kr->uniformizer() + kr->from_integer(1);
  auto y = kr->uniformizer() * kr->from_integer(2) + kr->from_integer(2);
  CHECK(iwasawa_log(x * y).agrees_with(iwasawa_log(x) + iwasawa_log(y)));
  CHECK(iwasawa_log(kr->uniformizer()).agrees_with(kr->zero()));
}

TEST_CASE("log refuses insufficient precision") {
  // At p = 2 one digit of relative precision is not enough to start the series.
  auto k = LocalField::make(2, 1, 20);
  CHECK_THROWS_AS(iwasawa_log(k->from_integer(3).truncated(1)), PrecisionError);
  CHECK_NOTHROW(iwasawa_log(k->from_integer(3).truncated(2)));
  auto k3 = LocalField::make(3, 1, 20);
  CHECK_THROWS_AS(iwasawa_log(k3->zero().truncated(4)), PrecisionError);
}

TEST_CASE("embedding of an unramified field") {
  auto e = LocalField::make(5, 2, 20);
  auto k = LocalField::make(5, 4, 20);
  FieldEmbedding iota(e, k);
  auto a = e->generator();
  auto b = a * a + e->from_integer(3);
  CHECK(iota(a * b).agrees_with(iota(a) * iota(b)));
  CHECK(iota(a + b).agrees_with(iota(a) + iota(b)));
  const auto& c = e->unramified_poly();
  auto r = iota(a);
  CHECK((r * r + k->from_integer(c[1]) * r + k->from_integer(c[0])).is_zero());
  CHECK(iwasawa_log(iota(b)).agrees_with(iota(iwasawa_log(b))));
  CHECK_THROWS_AS(FieldEmbedding(LocalField::make(5, 3, 20), k), FieldError);
}

TEST_CASE("square roots") {
  const auto k = make_field(7, 2, {}, 20);
  const auto q7 = make_field(7, 1, {}, 20);
  for (long a = 1; a < 40; a += 3) {
    const FieldElement x = k->from_coords(0, 20, {a, 2 * a + 1});
    const FieldElement sq = x * x * k->from_integer(49);
    const auto r = square_root(sq);
    REQUIRE(r.has_value());
    CHECK((*r * *r - sq).is_zero());
  }
  // 3 is not a square mod 7, but is one in the quadratic extension.
  CHECK_FALSE(square_root(q7->from_integer(3)).has_value());
  CHECK(square_root(k->from_integer(3)).has_value());
  CHECK_FALSE(square_root(q7->from_integer(7)).has_value());
  const auto two = square_root(q7->from_integer(2));
  REQUIRE(two.has_value());
  CHECK((*two * *two - q7->from_integer(2)).is_zero());
}
