#include "doctest.h"

#include <chrono>

#include "linv/synthetic.hpp"

using namespace linv;
using nlohmann::json;

namespace {
bool same(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }
}  // namespace

TEST_CASE("catalog groups have the expected orders") {
  std::map<std::string, int> orders = {{"C2", 2},  {"C2xC2", 4}, {"C6", 6},
                                       {"C2xC4", 8}, {"S3", 6},    {"D4", 8}};
  for (const auto& g : group_catalog()) {
    CHECK(g.table.order == orders.at(g.name));
    for (const auto& rep : g.irreps) CHECK(rep.size() == static_cast<std::size_t>(g.table.order));
  }
}

TEST_CASE("digit source does not depend on the precision") {
  const auto k40 = make_field(7, 2, {}, 40), k80 = make_field(7, 2, {}, 80);
  DigitSource a(99, 7), b(99, 7);
  for (int i = 0; i < 5; ++i) {
    const FieldElement x = a.element(k40, i % 2), y = b.element(k80, i % 2);
    CHECK(same(x, y.in_field(k40)));
  }
}

TEST_CASE("random synthetic fixtures load and both routes agree") {
  std::mt19937_64 rng(2024);
  int regular = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 40; ++i) {
    const SyntheticSpec spec = random_spec(rng, 40);
    CAPTURE(spec.group);
    CAPTURE(spec.p);
    const GaloisProblem prob = load_fixture(synthetic_fixture(spec));
    CHECK(validate_arithmetic(prob).ok());
    const Analysis an = analyze(prob);
    CHECK(an.leopoldt);
    const auto ref = random_refinement(an, rng, 2);
    if (!ref) continue;
    const auto rep = l_invariant(an, *ref);
    if (!rep.verdict.regular) continue;
    ++regular;
    CHECK(same(rep.value_block, rep.value_schur));
    CHECK(rep.certified_precision >= 30);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("40 fixtures in " << secs << " s, regular " << regular);
  CHECK(regular > 20);
}
