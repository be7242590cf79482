#include "doctest.h"

#include <sstream>

#include "linv/synthetic.hpp"

using namespace linv;
using nlohmann::json;

namespace {

bool has_failure(const std::vector<std::string>& fs, const std::string& needle) {
  for (const auto& f : fs)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> load_failures(const json& j) {
  try {
    load_fixture(j);
  } catch (const LoadError& e) {
    return e.failures();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal quadratic fixture") {
  const GaloisProblem prob = load_fixture(c2_split_fixture(20, 1));
  CHECK(prob.dim() == 1);
  const Analysis an = analyze(prob);
  CHECK(an.dplus == 0);
  CHECK(an.f == 1);
}

TEST_CASE("Q(i) fixture validates: f = 1, d+ = 0, e = 1") {
  const GaloisProblem prob = load_fixture(qi_fixture(40));
  const Report rep = validate_arithmetic(prob);
  CHECK(rep.ok());
  CHECK(rep.warnings.empty());
  const Analysis an = analyze(prob);
  CHECK(an.f == 1);
  CHECK(an.dplus == 0);
  CHECK(extra_zero_order(an, prob.refinement("default")).e == 1);
  CHECK(prob.units.has_embeddings());
}

TEST_CASE("load errors are itemized and name the offending data") {
  const json good = qi_fixture(20);

  SUBCASE("refinement of the wrong dimension") {
    json j = good;
    j["refinements"][0]["basis"] = {{1}};
    CHECK(has_failure(load_failures(j), "refinement dim ≠ d⁺"));
  }
  SUBCASE("action failing composition") {
    json j = good;
    j["units"]["action"][1] = {{1, 0}, {1, 1}};
    CHECK(has_failure(load_failures(j), "composition fails at (g,h) = (1,1)"));
  }
  SUBCASE("global unit with nonzero ord") {
    json j = cm_fixture(20, 2);
    j["units"]["ord_p"][0] = 1;
    CHECK(has_failure(load_failures(j), "ord_p[0] must be 0"));
  }
  SUBCASE("refinement not stable under Frobenius") {
    json j = weight1_regular_fixture(20, 1);
    j["refinements"][0]["basis"] = {{1, 0}};
    CHECK(has_failure(load_failures(j), "not stable under Frobenius"));
  }
  SUBCASE("several problems at once") {
    json j = good;
    j["refinements"][0]["basis"] = {{1}};
    j["units"]["action"][1] = {{1, 0}, {1, 1}};
    CHECK(load_failures(j).size() >= 2);
  }
  SUBCASE("missing keys") {
    json j = good;
    j.erase("units");
    CHECK(has_failure(load_failures(j), "missing key 'units'"));
  }
}

TEST_CASE("arithmetic validation failures") {
  SUBCASE("rank accounting names both numbers") {
    // Q(i) with p inert (Frobenius = tau) but still two p-units declared.
    json j = qi_fixture(20);
    j["group"]["frobenius"] = 1;
    j["group"]["Gp"] = {0, 1};
    j.erase("refinements");
    const GaloisProblem prob = load_fixture(j);
    const Report rep = validate_arithmetic(prob);
    CHECK_FALSE(rep.ok());
    CHECK(has_failure(rep.failures, "rank_total - rank_units = 2 but [G:G_p] = 1"));
  }
  SUBCASE("embedding valuations against ord_p name the index") {
    json j = qi_fixture(20);
    j["units"]["ord_p"] = {0, 1};
    const GaloisProblem prob = load_fixture(j);
    const Report rep = validate_arithmetic(prob);
    CHECK(has_failure(rep.failures, "embedding 0 has valuation 1 but ord_p[0] = 0"));
    CHECK(has_failure(rep.failures, "embedding 1 has valuation 0 but ord_p[1] = 1"));
  }
  SUBCASE("logs-only fixtures carry a warning") {
    const Report rep = validate_arithmetic(load_fixture(c2_split_fixture(20, 1)));
    CHECK(rep.ok());
    CHECK(has_failure(rep.warnings, "unverifiable"));
  }
}

TEST_CASE("serialize round-trips") {
  for (const json& j : {qi_fixture(30), cm_fixture(30, 4), adjoint_cm_fixture(30, 4),
                        weight1_regular_fixture(30, 4)}) {
    const GaloisProblem a = load_fixture(j);
    const json s = serialize(a);
    const GaloisProblem b = load_fixture(s);
    CHECK(serialize(b) == s);
    REQUIRE(a.units.logs.size() == b.units.logs.size());
    for (std::size_t i = 0; i < a.units.logs.size(); ++i)
      CHECK((a.units.logs[i] - b.units.logs[i]).is_zero());
    CHECK(a.refinements.size() == b.refinements.size());
    CHECK(a.cm.has_value() == b.cm.has_value());
    CHECK(a.adjoint_cm.has_value() == b.adjoint_cm.has_value());
  }
}

TEST_CASE("precision override and stream loading") {
  std::stringstream ss(qi_fixture(40).dump());
  LoadOptions opts;
  opts.precision_override = 25;
  const GaloisProblem prob = load_fixture(ss, opts);
  CHECK(prob.precision == 25);
  CHECK(prob.coeff_field->precision() == 25);
}

TEST_CASE("family members") {
  const GaloisProblem prob = load_fixture(adjoint_cm_fixture(20, 1));
  const FieldPtr& k = prob.coeff_field;
  const Refinement r = prob.family_member(ProjectiveParam::at(k->from_integer(2)), k->from_integer(3));
  CHECK((r.basis(0, 0) - k->from_integer(3)).is_zero());
  CHECK((r.basis(1, 0) - k->one()).is_zero());
  CHECK((r.basis(2, 0) - k->from_integer(2)).is_zero());
  const Refinement inf = prob.family_member(ProjectiveParam::infinity());
  CHECK(inf.basis(1, 0).is_zero());
  CHECK((inf.basis(2, 0) - k->one()).is_zero());
  const GaloisProblem q = load_fixture(qi_fixture(20));
  CHECK_THROWS_AS(q.family_member(ProjectiveParam::infinity()), std::invalid_argument);
}
