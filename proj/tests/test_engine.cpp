#include "doctest.h"

#include "linv/engine.hpp"

using namespace linv;
using nlohmann::json;

namespace {

// Problem over Q_p with a p-unit module of the form U_H (given) + Q[G/G_p],
// where the prime above p sits at the coset of the identity.
json abelian_problem(long p, long prec, const std::vector<std::vector<int>>& mult, int frob,
                     int conj, const std::vector<int>& gp, const json& w_matrices, int d,
                     const std::vector<std::vector<std::vector<int>>>& unit_action,
                     const std::vector<long>& logs) {
  const int n = static_cast<int>(mult.size());
  std::vector<int> coset_of(n, -1);
  std::vector<int> reps;
  for (int g = 0; g < n; ++g) {
    if (coset_of[g] >= 0) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int h : gp) coset_of[mult[g][h]] = c;
  }
  const int r = unit_action.empty() ? 0 : static_cast<int>(unit_action[0].size());
  const int m = static_cast<int>(reps.size()), R = r + m;
  json action = json::array();
  for (int g = 0; g < n; ++g) {
    std::vector<std::vector<int>> a(R, std::vector<int>(R, 0));
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) a[i][k] = unit_action[g][i][k];
    for (int c = 0; c < m; ++c) a[r + coset_of[mult[g][reps[c]]]][r + c] = 1;
    action.push_back(a);
  }
  std::vector<long> ord(R, 0);
  ord[r] = 1;
  json lj = json::array();
  for (long v : logs) lj.push_back({{"shift", 0}, {"prec", prec}, {"coeffs", {v}}});
  return {{"p", p},
          {"precision", prec},
          {"E", {{"unramified_degree", 1}}},
          {"coeff_field", {{"unramified_degree", 1}, {"eisenstein", nullptr}}},
          {"group", {{"order", n}, {"mult", mult}, {"frobenius", frob}, {"conjugation", conj},
                     {"Gp", gp}}},
          {"W", {{"dim", d}, {"matrices", w_matrices}, {"motivic", true}}},
          {"units", {{"rank_units", r}, {"rank_total", R}, {"action", action}, {"ord_p", ord},
                     {"logs", lj}}}};
}

const std::vector<std::vector<int>> kC2 = {{0, 1}, {1, 0}};
// C2 x C2 = {1, a, tau, a tau}, index = a-bit + 2 tau-bit.
const std::vector<std::vector<int>> kV4 = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};

// chi1 even (a -> -1), chi2 odd (tau -> -1).
json v4_w() {
  json m = json::array();
  for (int g = 0; g < 4; ++g) {
    const int c1 = (g & 1) ? -1 : 1, c2 = (g & 2) ? -1 : 1;
    m.push_back({{c1, 0}, {0, c2}});
  }
  return m;
}

std::vector<std::vector<std::vector<int>>> v4_units() {
  std::vector<std::vector<std::vector<int>>> u;
  for (int g = 0; g < 4; ++g) u.push_back({{(g & 1) ? -1 : 1}});
  return u;
}

Refinement line(const GaloisProblem& prob, long x, long y) {
  const auto& K = prob.coeff_field;
  Refinement r;
  r.name = "line";
  r.basis = PMatrix(2, 1);
  r.basis(0, 0) = K->from_integer(x);
  r.basis(1, 0) = K->from_integer(y);
  return r;
}

bool same(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("odd character, p split: one extra zero and L = l(tau pi) - l(pi)") {
  const long p = 5, N = 20;
  const json j = abelian_problem(p, N, kC2, 0, 1, {0}, json::array({{{1}}, {{-1}}}), 1, {},
                                 {5 * 1234567, 5 * 7654321});
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  CHECK(an.dplus == 0);
  CHECK(an.f == 1);
  CHECK(an.W_circle.cols() == 1);
  CHECK(an.leopoldt);
  Refinement zero{"zero", PMatrix(1, 0), true, {}, {}};
  const auto rep = l_invariant(an, zero);
  REQUIRE(rep.verdict.regular);
  CHECK(rep.e == 1);
  CHECK(same(rep.verdict.reg, prob.coeff_field->one()));
  const FieldElement expect = prob.units.logs[1] - prob.units.logs[0];
  CHECK(same(rep.value_block, expect));
  CHECK(same(rep.value_schur, expect));
  CHECK(rep.certified_precision >= N);
}

TEST_CASE("odd character, p inert: no extra zero") {
  const json j = abelian_problem(7, 12, kC2, 1, 1, {0, 1}, json::array({{{1}}, {{-1}}}), 1, {},
                                 {7 * 3});
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  CHECK(an.f == 0);
  Refinement zero{"zero", PMatrix(1, 0), true, {}, {}};
  const auto rep = l_invariant(an, zero);
  CHECK(rep.verdict.regular);
  CHECK(rep.e == 0);
  CHECK(same(rep.value(), prob.coeff_field->one()));
}

TEST_CASE("biquadratic, p split completely") {
  const long p = 7, N = 16;
  // logs: unit eps, then the four conjugates of the p-unit pi.
  const json j = abelian_problem(p, N, kV4, 0, 2, {0}, v4_w(), 2, v4_units(),
                                 {7 * 11, 7 * 101, 7 * 2023, 7 * 555, 7 * 4242});
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  const auto& K = prob.coeff_field;
  const auto& l = prob.units.logs;
  CHECK(an.d == 2);
  CHECK(an.dplus == 1);
  CHECK(an.f == 2);
  CHECK(an.punits.size() == 3);
  CHECK(an.W_circle.cols() == 1);
  CHECK(an.W_circle(0, 0).is_zero());

  // L depends only on the odd character: -(l_1 + l_a - l_tau - l_atau).
  const FieldElement expect = -(l[1] + l[2] - l[3] - l[4]);

  SUBCASE("route agreement and the closed form on several lines") {
    for (auto [x, y] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}, {2, -3}, {5, 7}}) {
      const Refinement ref = line(prob, x, y);
      const auto rep = l_invariant(an, ref);
      REQUIRE(rep.verdict.regular);
      CHECK(rep.e == 1);
      CHECK(same(rep.value_block, expect));
      CHECK(same(rep.value_schur, expect));
      // Reg = x * log(eps) up to the sign of the chosen unit hom.
      const FieldElement reg = rep.verdict.reg;
      CHECK((same(reg, K->from_integer(x) * l[0]) || same(reg, -K->from_integer(x) * l[0])));
    }
  }

  SUBCASE("the line W° is singular and both criteria say so") {
    const auto v = is_regular(an, line(prob, 0, 1));
    CHECK_FALSE(v.regular);
    CHECK_FALSE(v.reg_nonzero);
    CHECK_FALSE(v.direct_sum);
    const auto rep = l_invariant(an, line(prob, 0, 1));
    CHECK(rep.singular());
  }

  SUBCASE("ord kernel has dimension d+ + e") {
    const Refinement ref = line(prob, 3, 2);
    const ExtraZeros ez = extra_zero_order(an, ref);
    CHECK(ez.e == 1);
    CHECK(ez.W1_plus.cols() == 1);
    CHECK(ez.Wm1_minus.cols() == 0);
    const KappaSet kp = kappa_prime_basis(an, ez);
    CHECK(kp.size() == 1);
    // kappa' kills W+ under ord.
    CHECK((kp.ord_rows * ref.basis)(0, 0).is_zero());
  }

  SUBCASE("JSON report carries both values and all matrices") {
    const json r = report_to_json(l_invariant(an, line(prob, 1, 1)));
    CHECK(r["regular"] == true);
    CHECK(r["e"] == 1);
    CHECK(r["matrices"].contains("O_minus"));
    CHECK(r.contains("value_schur"));
  }
}

TEST_CASE("biquadratic, Frobenius = tau: regular lines have e = 0") {
  const json j = abelian_problem(5, 12, kV4, 2, 2, {0, 2}, v4_w(), 2, v4_units(),
                                 {5 * 3, 5 * 17, 5 * 19});
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  CHECK(an.f == 1);
  const auto rep = l_invariant(an, line(prob, 1, 0));
  REQUIRE(rep.verdict.regular);
  CHECK(rep.e == 0);
  CHECK(same(rep.value(), prob.coeff_field->one()));
  // e1 + e2 is not Frobenius-stable.
  CHECK_THROWS_AS(l_invariant(an, line(prob, 1, 1)), std::invalid_argument);
}

TEST_CASE("Leopoldt failure: vanishing unit log leaves no regular refinement") {
  const json j = abelian_problem(7, 12, kV4, 0, 2, {0}, v4_w(), 2, v4_units(),
                                 {0, 7 * 101, 7 * 2023, 7 * 555, 7 * 4242});
  const GaloisProblem prob = load_fixture(j);
  const Analysis an = analyze(prob);
  CHECK_FALSE(an.leopoldt);
  CHECK(an.W_circle.cols() == 2);
  const auto v = is_regular(an, line(prob, 1, 1));
  CHECK_FALSE(v.regular);
  CHECK(v.reason.find("no regular refinement exists") != std::string::npos);
}

TEST_CASE("dual L-invariant of small matrices") {
  const auto K = make_field(11, 1, {}, 10);
  PMatrix jf(1, 1), jc(1, 1);
  jf(0, 0) = K->from_integer(6);
  jc(0, 0) = K->from_integer(3);
  CHECK(same(dual_l_invariant(jf, jc), K->from_integer(-2)));

  PMatrix a(2, 2);
  a << K->from_integer(1), K->from_integer(2), K->from_integer(3), K->from_integer(4);
  CHECK(same(dual_l_invariant(a, a), K->one()));
  PMatrix s(2, 2);
  s << K->from_integer(1), K->from_integer(2), K->from_integer(2), K->from_integer(4);
  CHECK_THROWS_AS(dual_l_invariant(a, s), SingularMatrix);
}

TEST_CASE("block and Schur routes agree on random-looking matrices") {
  const auto K = make_field(13, 2, {}, 14);
  auto el = [&](long a, long b) { return K->from_coords(0, 14, {a, b}); };
  LMatrices m;
  m.e = 2;
  m.A_plus = PMatrix(1, 1);
  m.A_plus << el(13 * 4, 13 * 9);
  m.A_minus = PMatrix(2, 1);
  m.A_minus << el(13 * 7, 13), el(169 * 2, 13 * 5);
  m.B_plus = PMatrix(1, 2);
  m.B_plus << el(13 * 3, 13 * 8), el(13 * 12, 169);
  m.B_minus = PMatrix(2, 2);
  m.B_minus << el(13, 13 * 2), el(13 * 6, 0), el(13 * 5, 13 * 11), el(13 * 10, 13 * 3);
  m.O_minus = PMatrix(2, 2);
  m.O_minus << K->from_integer(1), K->from_integer(2), K->from_integer(0), K->from_integer(3);
  const LValues v = l_invariant_from_matrices(m);
  CHECK(same(v.block, v.schur));
  // Remark-style case: with A- = 0 the value is det B- / det O-.
  m.A_minus << K->zero(), K->zero();
  const LValues w = l_invariant_from_matrices(m);
  const FieldElement det_b =
      m.B_minus(0, 0) * m.B_minus(1, 1) - m.B_minus(0, 1) * m.B_minus(1, 0);
  CHECK(same(w.block, det_b / K->from_integer(3)));
}
