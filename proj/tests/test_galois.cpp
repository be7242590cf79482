#include <algorithm>
#include <map>

#include "doctest.h"
#include "linv/galois.hpp"

using namespace linv;

namespace {

using Perm = std::vector<int>;

// Group table from a list of permutations closed under composition, with the
// identity listed first.  (a*b)(x) = a(b(x)).
FiniteGroup perm_group(const std::vector<Perm>& elems, int frob, int conj) {
  FiniteGroup g;
  g.order = static_cast<int>(elems.size());
  std::map<Perm, int> index;
  for (int i = 0; i < g.order; ++i) index[elems[i]] = i;
  g.mult.assign(g.order, std::vector<int>(g.order));
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) {
      Perm c(elems[a].size());
      for (std::size_t x = 0; x < c.size(); ++x) c[x] = elems[a][elems[b][x]];
      g.mult[a][b] = index.at(c);
    }
  g.frobenius = frob;
  g.conjugation = conj;
  g.Gp = g.generated_subgroup({frob});
  return g;
}

std::vector<Perm> s3_elements() {
  return {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
}

int sign_of(const Perm& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

QMatrix perm_matrix(const Perm& p) {
  QMatrix m = QMatrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t x = 0; x < p.size(); ++x) m(p[x], x) = 1;
  return m;
}

// Standard rep on {v : sum v = 0} with basis e0 - e2, e1 - e2.
QMatrix std_matrix(const Perm& p) {
  QMatrix full = perm_matrix(p);
  QMatrix b(3, 2);
  b << 1, 0, 0, 1, -1, -1;
  QMatrix img = full * b;  // express in basis: coordinates are the first two entries
  return img.topRows(2);
}

}  // namespace

TEST_CASE("group validation") {
  auto elems = s3_elements();
  FiniteGroup s3 = perm_group(elems, 1, 3);
  auto r = validate_group(s3);
  CHECK(r.ok());
  CHECK(s3.inverse[1] == 2);
  CHECK(s3.element_order(1) == 3);
  CHECK(s3.gp_index() == 2);
  CHECK(s3.generated_subgroup(s3.generators()).size() == 6u);

  FiniteGroup c2;
  c2.order = 2;
  c2.mult = {{0, 1}, {1, 0}};
  c2.frobenius = 0;
  c2.conjugation = 1;
  c2.Gp = {0};
  CHECK(validate_group(c2).ok());

  FiniteGroup bad = s3;
  std::swap(bad.mult[1][3], bad.mult[1][4]);
  auto rb = validate_group(bad);
  REQUIRE_FALSE(rb.ok());
  CHECK(rb.failures[0].find("associativity fails at") != std::string::npos);

  FiniteGroup badgp = s3;
  badgp.Gp = {0, 3, 4};
  CHECK_FALSE(validate_group(badgp).ok());
  FiniteGroup badtau = s3;
  badtau.conjugation = 1;
  CHECK_FALSE(validate_group(badtau).ok());
}

TEST_CASE("representations, fixed spaces and Hom spaces") {
  auto elems = s3_elements();
  auto g = std::make_shared<FiniteGroup>(perm_group(elems, 1, 3));
  validate_group(*g);
  QRep stdrep{g, 2, {}, "std"}, sign{g, 1, {}, "sign"}, triv{g, 1, {}, "triv"};
  for (const auto& p : elems) {
    stdrep.matrices.push_back(std_matrix(p));
    sign.matrices.push_back(QMatrix::Constant(1, 1, Rational(sign_of(p))));
    triv.matrices.push_back(QMatrix::Constant(1, 1, Rational(1)));
  }
  CHECK_FALSE(homomorphism_failure(stdrep).has_value());
  CHECK_FALSE(homomorphism_failure(sign).has_value());
  CHECK(plus_dimension(stdrep) == 1);
  CHECK(plus_dimension(sign) == 0);
  CHECK(fixed_subspace(sign, {3}).cols() == 0);
  CHECK(fixed_subspace(triv, {1, 3}).cols() == 1);
  CHECK(fixed_subspace(stdrep, {0, 1, 2, 3, 4, 5}).cols() == 0);

  CHECK(equivariant_homs(stdrep, stdrep).size() == 1u);
  CHECK(equivariant_homs(sign, triv).empty());
  auto homs = equivariant_homs(stdrep, stdrep);
  for (int x = 0; x < 6; ++x) {
    QMatrix res = stdrep(x) * homs[0] - homs[0] * stdrep(x);
    CHECK(res == QMatrix::Zero(2, 2));
  }

  QRep broken = stdrep;
  broken.matrices[4] = broken.matrices[3];
  auto f = homomorphism_failure(broken);
  REQUIRE(f.has_value());

  // Over a p-adic field, the same answers.
  auto k = LocalField::make(7, 1, 20);
  auto pstd = to_field(stdrep, k);
  CHECK(plus_dimension(pstd) == 1);
  CHECK(equivariant_homs(pstd, to_field(sign, k)).empty());
}

TEST_CASE("isotypic idempotent on the regular representation") {
  auto elems = s3_elements();
  auto g = std::make_shared<FiniteGroup>(perm_group(elems, 1, 3));
  validate_group(*g);
  auto k = LocalField::make(5, 1, 20);
  QRep reg{g, 6, {}, "regular"}, stdrep{g, 2, {}, "std"};
  for (int a = 0; a < 6; ++a) {
    Perm p(6);
    for (int b = 0; b < 6; ++b) p[b] = g->mul(a, b);
    reg.matrices.push_back(perm_matrix(p));
    stdrep.matrices.push_back(std_matrix(elems[a]));
  }
  auto preg = to_field(reg, k);
  auto pstd = to_field(stdrep, k);
  PVector u(6);
  for (int i = 0; i < 6; ++i) u(i) = k->from_integer(3 + i * i);
  PVector v = apply_idempotent(IdempotentKind::Isotypic, preg, u, &pstd);
  PVector v2 = apply_idempotent(IdempotentKind::Isotypic, preg, v, &pstd);
  for (int i = 0; i < 6; ++i) CHECK(v(i).agrees_with(v2(i)));

  // Oracle: trivial and sign projections written out by hand vanish on v.
  FieldElement st = k->zero(), ss = k->zero();
  for (int i = 0; i < 6; ++i) st += v(i);
  for (int i = 0; i < 6; ++i) ss += v(i) * k->from_integer(sign_of(elems[i]));
  CHECK(st.is_zero());
  CHECK(ss.is_zero());

  // Idempotents commute with the action.
  PMatrix e = idempotent_matrix(IdempotentKind::Isotypic, preg, &pstd);
  for (int a = 0; a < 6; ++a) {
    PMatrix d = e * preg(a) - preg(a) * e;
    for (Eigen::Index i = 0; i < d.size(); ++i) CHECK(d.data()[i].is_zero());
  }

  // W_one with trivial Gp is the identity.
  auto g1 = std::make_shared<FiniteGroup>(perm_group(elems, 0, 3));
  validate_group(*g1);
  PRep reg1 = preg;
  reg1.group = g1;
  PVector w = apply_idempotent(IdempotentKind::WOne, reg1, u);
  for (int i = 0; i < 6; ++i) CHECK(w(i).agrees_with(u(i)));
}
