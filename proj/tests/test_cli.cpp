#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "linv/synthetic.hpp"

using namespace linv;
using nlohmann::json;

namespace {

const std::string kFixtures = std::string(LINV_SOURCE_DIR) + "/fixtures/";

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "linv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_fixture(const std::string& name, const json& j) {
  const auto path = std::filesystem::temp_directory_path() / ("linv_test_" + name);
  std::ofstream(path) << j.dump();
  return path.string();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("validate") {
  SUBCASE("checked-in fixtures pass") {
    for (const char* f : {"qi_p5.json", "cm.json", "adjcm.json", "weight1.json", "c2_split.json"}) {
      CAPTURE(f);
      const Run r = run({"validate", kFixtures + f});
      CHECK(r.code == cli::kOk);
      CHECK(r.out.find("all checks pass") != std::string::npos);
    }
  }
  SUBCASE("logs-only fixtures warn that embeddings cannot be checked") {
    const Run r = run({"validate", kFixtures + "c2_split.json"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("embedding consistency unverifiable") != std::string::npos);
  }
  SUBCASE("broken fixture lists every failure") {
    json j = read_json(kFixtures + "qi_p5.json");
    j["units"]["ord_p"] = {0, 1};  // contradicts the embeddings
    j["group"]["conjugation"] = 0;
    const Run r = run({"validate", temp_fixture("broken.json", j)});
    CHECK(r.code == cli::kValidationFailure);
    CHECK(r.err.find("  - ") != std::string::npos);
  }
  SUBCASE("json format") {
    const Run r = run({"validate", kFixtures + "qi_p5.json", "--format", "json"});
    CHECK(r.code == cli::kOk);
    CHECK(json::parse(r.out)["ok"] == true);
  }
}

TEST_CASE("compute") {
  SUBCASE("Q(i) with cross-check, fixture found through LINV_FIXTURE_DIR") {
    ::setenv("LINV_FIXTURE_DIR", kFixtures.c_str(), 1);
    const Run r = run({"compute", "qi_p5.json", "--refinement", "default", "--cross-check",
                       "--format", "json"});
    ::unsetenv("LINV_FIXTURE_DIR");
    REQUIRE(r.code == cli::kOk);
    const json doc = json::parse(r.out);
    const json& rep = doc["reports"][0];
    CHECK(rep["e"] == 1);
    CHECK(rep["regular"] == true);
    CHECK(rep["cross_check"][0]["route"] == "gross");
    CHECK(rep["cross_check"][0]["agree"] == true);
    // The report round-trips: the serialized value reloads to the engine's value.
    const GaloisProblem prob = load_fixture_file(kFixtures + "qi_p5.json");
    const FieldElement v = element_from_json(rep["value_block"], prob.coeff_field);
    const auto direct = l_invariant(prob, prob.refinement("default"));
    CHECK((v - direct.value()).is_zero());
    CHECK(v.absolute_precision() == direct.value().absolute_precision());
  }
  SUBCASE("CM sweep flags the singular row and keeps going") {
    const Run r =
        run({"compute", kFixtures + "cm.json", "--sweep", "s=0,1,2,∞,S", "--cross-check",
             "--format", "json"});
    REQUIRE(r.code == cli::kOk);
    const json rows = json::parse(r.out)["sweep"];
    REQUIRE(rows.size() == 5);
    for (int i = 0; i < 4; ++i) {
      CHECK(rows[i]["regular"] == true);
      CHECK(rows[i]["cross_check"][0]["agree"] == true);
    }
    CHECK(rows[3]["s"] == "∞");
    CHECK(rows[4]["regular"] == false);
  }
  SUBCASE("adjoint CM theta agrees with 2 L_p L(phi)") {
    const Run r = run({"compute", kFixtures + "adjcm.json", "--refinement", "theta",
                       "--cross-check"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("cross-check adjoint_cm: agree") != std::string::npos);
    CHECK(r.out.find("cross-check adjoint_cm_dual: agree") != std::string::npos);
    CHECK(r.out.find("DISAGREE") == std::string::npos);
  }
  SUBCASE("two-parameter sweep with fixed t") {
    const Run r = run({"compute", kFixtures + "adjcm.json", "--sweep", "s=0,3,inf", "--t", "5",
                       "--cross-check"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("DISAGREE") == std::string::npos);
  }
  SUBCASE("singular named refinement exits 2") {
    const Run r = run({"compute", kFixtures + "cm.json", "--refinement", "W_circle"});
    CHECK(r.code == cli::kSingularRefinement);
    CHECK(r.out.find("singular refinement") != std::string::npos);
  }
  SUBCASE("low-precision data at a singular refinement exits 3") {
    json j = read_json(kFixtures + "cm.json");
    for (auto& e : j["units"]["logs"]) e["prec"] = 4;
    const Run r = run({"compute", temp_fixture("lowprec.json", j), "--refinement", "W_circle"});
    CHECK(r.code == cli::kPrecisionShortfall);
    CHECK(r.err.find("--precision") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(run({"compute", kFixtures + "cm.json", "--refinement", "nope"}).code ==
          cli::kValidationFailure);
    CHECK(run({"compute", kFixtures + "qi_p5.json", "--sweep", "s=0"}).code ==
          cli::kValidationFailure);
    CHECK(run({"compute", kFixtures + "cm.json", "--sweep", "s=0", "--refinement", "s=0"}).code !=
          cli::kOk);
    CHECK(run({"validate", kFixtures + "missing.json"}).code == cli::kValidationFailure);
  }
  SUBCASE("precision override") {
    const Run r = run({"compute", kFixtures + "qi_p5.json", "--precision", "20", "--format",
                       "json"});
    REQUIRE(r.code == cli::kOk);
    const json doc = json::parse(r.out);
    CHECK(doc["precision"] == 20);
    CHECK(doc["reports"][0]["certified_precision"].get<long>() <= 20);
  }
}

TEST_CASE("checked-in fixtures are reproducible") {
  const std::vector<std::pair<std::string, json>> files = {
      {"qi_p5.json", qi_fixture(40)},
      {"c2_split.json", c2_split_fixture(40, 5)},
      {"cm.json", cm_fixture(40, 11)},
      {"adjcm.json", adjoint_cm_fixture(40, 21)},
      {"weight1.json", weight1_regular_fixture(40, 8)},
  };
  for (const auto& [name, j] : files) {
    CAPTURE(name);
    CHECK(read_json(kFixtures + name) == j);
  }
}
