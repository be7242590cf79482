// Writes the checked-in fixtures.  Everything is seeded, so rerunning
// reproduces the files byte for byte.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "linv/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate the example fixtures"};
  std::string outdir = "fixtures";
  long precision = 40;
  app.add_option("outdir", outdir);
  app.add_option("--precision", precision)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(outdir);
  const std::vector<std::pair<std::string, nlohmann::json>> files = {
      {"qi_p5.json", linv::qi_fixture(precision)},
      {"c2_split.json", linv::c2_split_fixture(precision, 5)},
      {"cm.json", linv::cm_fixture(precision, 11)},
      {"adjcm.json", linv::adjoint_cm_fixture(precision, 21)},
      {"weight1.json", linv::weight1_regular_fixture(precision, 8)},
  };
  for (const auto& [name, j] : files) {
    const auto path = std::filesystem::path(outdir) / name;
    std::ofstream(path) << j.dump(1) << "\n";
    std::cout << path.string() << "\n";
  }
  return 0;
}
