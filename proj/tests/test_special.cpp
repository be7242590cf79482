#include "doctest.h"

#include "linv/synthetic.hpp"

using namespace linv;
using nlohmann::json;

namespace {

bool same(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }

FieldElement sign_pow(const FieldPtr& k, int e) { return k->from_integer(e % 2 == 0 ? 1 : -1); }

Refinement empty_refinement(int d) { return {"zero", PMatrix(d, 0), true, {}, {}}; }

}  // namespace

TEST_CASE("Gross regulator matches the engine on totally odd W") {
  SUBCASE("quadratic character, p split") {
    const GaloisProblem prob = load_fixture(c2_split_fixture(40, 5));
    const Analysis an = analyze(prob);
    const auto rep = l_invariant(an, empty_refinement(1));
    REQUIRE(rep.verdict.regular);
    CHECK(rep.e == 1);
    CHECK(same(rep.value(), -gross_regulator(an)));
  }
  SUBCASE("random totally odd fixtures") {
    std::mt19937_64 rng(77);
    int seen = 0;
    for (int i = 0; i < 300 && seen < 10; ++i) {
      const SyntheticSpec spec = random_spec(rng, 30);
      const GaloisProblem prob = load_fixture(synthetic_fixture(spec));
      const Analysis an = analyze(prob);
      if (an.dplus != 0) continue;
      ++seen;
      const auto rep = l_invariant(an, empty_refinement(an.d));
      REQUIRE(rep.verdict.regular);
      CHECK(rep.e == an.f);
      CHECK(same(rep.value(), sign_pow(prob.coeff_field, rep.e) * gross_regulator(an)));
    }
    CHECK(seen >= 3);
  }
  SUBCASE("refuses d+ > 0") {
    const GaloisProblem prob = load_fixture(cm_fixture(20, 1));
    CHECK_THROWS_AS(gross_regulator(prob), std::invalid_argument);
  }
}

TEST_CASE("Q(i) at p = 5: L = log of (2+i)/(2-i) under the fixed embedding") {
  const GaloisProblem prob = load_fixture(qi_fixture(40));
  const Analysis an = analyze(prob);
  const auto rep = l_invariant(an, prob.refinement("default"));
  REQUIRE(rep.verdict.regular);
  CHECK(rep.e == 1);
  const FieldPtr& k = prob.coeff_field;
  const FieldElement i = teichmuller(k->from_integer(2));
  const FieldElement two = k->from_integer(2);
  const FieldElement oracle = iwasawa_log((two + i) / (two - i));
  CHECK(same(rep.value(), oracle));
  CHECK(same(rep.value(), -gross_regulator(an)));
  CHECK(rep.certified_precision >= 30);
}

TEST_CASE("CM weight one: the line family e1 + s e2") {
  const GaloisProblem prob = load_fixture(cm_fixture(40, 11));
  const Analysis an = analyze(prob);
  REQUIRE(prob.cm);
  const CMSpecial& cm = *prob.cm;
  const FieldPtr& k = prob.coeff_field;
  CHECK(an.dplus == 1);
  CHECK(an.f == 2);
  // W° is the line e1 + S e2.
  REQUIRE(an.W_circle.cols() == 1);
  CHECK(same(an.W_circle(1, 0) / an.W_circle(0, 0), cm.slope));
  CHECK(same(cm.slope * cm.slope_bar, k->one()));

  for (long s : {0L, 1L, 2L, -3L, 7L, 49L, 10L}) {
    CAPTURE(s);
    const auto param = ProjectiveParam::at(k->from_integer(s));
    const auto rep = l_invariant(an, prob.family_member(param));
    REQUIRE(rep.verdict.regular);
    CHECK(rep.e == 1);
    CHECK(same(rep.value(), cm_line_l_invariant(param, cm)));
  }
  const auto inf = l_invariant(an, prob.family_member(ProjectiveParam::infinity()));
  REQUIRE(inf.verdict.regular);
  CHECK(same(inf.value(), cm.l_psi_bar));
  CHECK(same(l_invariant(an, prob.refinement("s=0")).value(), cm.l_psi));

  const auto sing = l_invariant(an, prob.family_member(ProjectiveParam::at(cm.slope)));
  CHECK(sing.singular());
  CHECK_THROWS_AS(cm_line_l_invariant(ProjectiveParam::at(cm.slope), cm), SingularRefinement);
}

TEST_CASE("CM character invariant: explicit and normalized forms agree") {
  const GaloisProblem prob = load_fixture(cm_fixture(40, 3));
  const Analysis an = analyze(prob);
  const FieldPtr& k = prob.coeff_field;
  PVector e1(2), e2(2);
  e1 << k->one(), k->zero();
  e2 << k->zero(), k->one();
  const CMUnitData d = cm_unit_data(an, e1, e2, PMatrix(2, 0));
  const CMCharRoutes r = cm_char_l_invariant(d);
  CHECK(same(r.explicit_form, r.normalized_form));
  CHECK(same(r.explicit_form, prob.cm->l_psi));
  CHECK(same(cm_slope(d.log_eps, d.log_tau_eps), prob.cm->slope));
}

TEST_CASE("adjoint CM: the family t w1 + w2 + s w3") {
  const GaloisProblem prob = load_fixture(adjoint_cm_fixture(40, 21));
  const Analysis an = analyze(prob);
  REQUIRE(prob.adjoint_cm);
  const AdjointCMSpecial& a = *prob.adjoint_cm;
  const FieldPtr& k = prob.coeff_field;
  CHECK(an.d == 3);
  CHECK(an.dplus == 1);
  CHECK(an.f == 3);
  CHECK(adjoint_cm_generic(a));

  for (long s : {0L, 2L, -5L}) {
    std::optional<FieldElement> first;
    for (long t : {0L, 1L, -4L, 9L}) {
      CAPTURE(s);
      CAPTURE(t);
      const auto sp = ProjectiveParam::at(k->from_integer(s));
      const FieldElement tv = k->from_integer(t);
      const auto rep = l_invariant(an, prob.family_member(sp, tv));
      REQUIRE(rep.verdict.regular);
      CHECK(rep.e == 2);
      const FieldElement closed = adjoint_cm_l_invariant(sp, tv, a);
      CHECK(same(rep.value(), closed));
      const AdjointCMMatrices m = adjoint_cm_matrices(sp, tv, a);
      CHECK(same(dual_l_invariant(m.Jf, m.Jc), rep.value()));
      if (!first) first = rep.value();
      CHECK(same(rep.value(), *first));
    }
  }
  const FieldElement two_lp = k->from_integer(2) * a.L_p;
  CHECK(same(l_invariant(an, prob.refinement("theta")).value(), two_lp * a.l_phi));
  CHECK(same(l_invariant(an, prob.refinement("theta_bar")).value(), two_lp * a.l_phi_bar));
}

TEST_CASE("weight one, p-regular with alpha = 1") {
  const GaloisProblem prob = load_fixture(weight1_regular_fixture(40, 8));
  const Analysis an = analyze(prob);
  const auto rep = l_invariant(an, prob.refinement("beta"));
  REQUIRE(rep.verdict.regular);
  CHECK(rep.e == 1);
  const auto [wa, wb] = weight1_eigenvectors(prob);
  REQUIRE(an.punits.size() == 2);
  auto at = [](const PMatrix& rows, int i, const PVector& w) { return (rows.row(i) * w)(0, 0); };
  const FieldElement value = weight1_l_invariant(
      CMCase::Regular, at(an.punits.log_rows, 0, wa), at(an.punits.log_rows, 0, wb),
      at(an.punits.log_rows, 1, wa), at(an.punits.log_rows, 1, wb), at(an.punits.ord_rows, 1, wa));
  CHECK(same(rep.value(), value));
}

TEST_CASE("weight one, p-regular: refining by the alpha = 1 line has no extra zero") {
  const GaloisProblem prob = load_fixture(weight1_regular_fixture(40, 8));
  const Analysis an = analyze(prob);
  const auto [wa, wb] = weight1_eigenvectors(prob);
  const Refinement alpha{"alpha", wa, true, {}, {}};
  const auto rep = l_invariant(an, alpha);
  REQUIRE(rep.verdict.regular);
  CHECK(rep.e == 0);
  CHECK(rep.matrices.A_minus.size() == 0);
  CHECK(rep.matrices.B_minus.size() == 0);
  CHECK(rep.matrices.O_minus.size() == 0);
  CHECK(same(rep.value(), prob.coeff_field->one()));
}

TEST_CASE("CM weight one as the irregular case of the four-scalar formula") {
  const GaloisProblem prob = load_fixture(cm_fixture(40, 11));
  const Analysis an = analyze(prob);
  for (const char* name : {"s=0", "s=1", "s=inf"}) {
    CAPTURE(name);
    const auto rep = l_invariant(an, prob.refinement(name));
    REQUIRE(rep.verdict.regular);
    REQUIRE(rep.e == 1);
    const LMatrices& m = rep.matrices;
    REQUIRE(m.A_plus.rows() == 1);
    // the formula reads a = -, b = +
    const FieldElement v = weight1_l_invariant(CMCase::Irregular, m.A_minus(0, 0), m.A_plus(0, 0),
                                               m.B_minus(0, 0), m.B_plus(0, 0), m.O_minus(0, 0));
    CHECK(same(rep.value(), v));
  }
}

TEST_CASE("Frobenius trivial on W and w- taken in W°: A- vanishes") {
  const GaloisProblem prob = load_fixture(cm_fixture(40, 11));
  const Analysis an = analyze(prob);
  const Refinement& ref = prob.refinement("s=1");
  const auto rep = l_invariant(an, ref);
  REQUIRE(rep.verdict.regular);
  NotationBases b = default_bases(an, ref);
  b.w_minus = an.W_circle;
  const LMatrices m = assemble_matrices(b);
  REQUIRE(m.A_minus.size() == 1);
  CHECK(m.A_minus(0, 0).is_zero());
  const LValues v = l_invariant_from_matrices(m);
  CHECK(same(v.block, rep.value()));
  CHECK(same(v.schur, rep.value()));
}

TEST_CASE("closed forms on trivial inputs") {
  const auto k = make_field(7, 1, {}, 20);
  const FieldElement le = k->from_integer(7 * 3), lu = k->from_integer(7 * 5);
  CHECK(same(weight1_l_invariant(CMCase::Regular, le, le, lu, lu, k->one()), k->zero()));
  CHECK(same(weight1_l_invariant(CMCase::Regular, le, k->from_integer(7 * 2), k->zero(), lu,
                                 k->one()),
             le * lu / k->from_integer(14)));
  CHECK(same(cm_slope(le, le), -k->one()));
  CHECK_THROWS(cm_slope(le, k->zero()));
}
