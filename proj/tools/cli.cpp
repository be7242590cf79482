#include "cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

#include "linv/special.hpp"

namespace linv::cli {

using nlohmann::json;

namespace {

struct Config {
  std::string fixture;
  std::string refinement;
  std::string sweep;
  std::string t;
  bool cross_check = false;
  long precision = 0;
  std::string format = "text";
};

GaloisProblem load(const Config& c) {
  LoadOptions opts;
  if (c.precision > 0) opts.precision_override = c.precision;
  return load_fixture_file(resolve_fixture_path(c.fixture), opts);
}

FieldElement parse_scalar(const std::string& tok, const GaloisProblem& prob) {
  const FieldPtr& k = prob.coeff_field;
  if (tok == "S" || tok == "S_psi") {
    if (!prob.cm) throw std::invalid_argument("'" + tok + "' needs a fixture with CM data");
    return prob.cm->slope;
  }
  const auto slash = tok.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return k->from_integer(v);
    }
    const long num = std::stol(tok.substr(0, slash));
    const long den = std::stol(tok.substr(slash + 1), &used);
    if (used != tok.size() - slash - 1 || den == 0) throw std::invalid_argument(tok);
    return k->from_rational(Rational(num, den));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse parameter value '" + tok + "'");
  }
}

ProjectiveParam parse_param(const std::string& tok, const GaloisProblem& prob) {
  if (tok == "inf" || tok == "∞" || tok == "infinity") return ProjectiveParam::infinity();
  return ProjectiveParam::at(parse_scalar(tok, prob));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

/// (s, t) of a refinement inside the fixture's family, if it is a member.
std::optional<std::pair<ProjectiveParam, std::optional<FieldElement>>> family_coordinates(
    const GaloisProblem& prob, const Refinement& ref) {
  if (ref.s) return std::make_pair(*ref.s, ref.t);
  if (!prob.family || ref.basis.cols() != 1) return std::nullopt;
  const auto& fam = *prob.family;
  const Eigen::Index d = ref.basis.rows();
  const int n = fam.t_direction ? 3 : 2;
  PMatrix sys(d, n + 1);
  sys.col(0) = fam.base;
  sys.col(1) = fam.s_direction;
  if (fam.t_direction) sys.col(2) = *fam.t_direction;
  sys.col(n) = ref.basis.col(0);
  const PMatrix ker = kernel_basis(sys);
  if (ker.cols() != 1 || ker(n, 0).is_zero()) return std::nullopt;
  // v = -(c0 base + c1 s_dir + c2 t_dir) / c_n.
  const FieldElement c0 = ker(0, 0), c1 = ker(1, 0);
  std::optional<FieldElement> t;
  if (c0.is_zero()) {
    if (fam.t_direction) t = ker(2, 0) / c1;
    return std::make_pair(ProjectiveParam::infinity(), t);
  }
  if (fam.t_direction) t = ker(2, 0) / c0;
  return std::make_pair(ProjectiveParam::at(c1 / c0), t);
}

struct CrossCheck {
  std::string name;
  FieldElement value;
  bool agree = false;
};

std::vector<CrossCheck> cross_checks(const Analysis& an, const Refinement& ref,
                                     const LInvariantReport& rep) {
  std::vector<CrossCheck> out;
  const GaloisProblem& prob = *an.prob;
  auto add = [&](std::string name, FieldElement v) {
    const bool agree = (v - rep.value()).is_zero();
    out.push_back({std::move(name), std::move(v), agree});
  };
  if (!rep.verdict.regular) return out;
  if (an.dplus == 0) {
    const FieldElement sign = prob.coeff_field->from_integer(rep.e % 2 == 0 ? 1 : -1);
    add("gross", sign * gross_regulator(an));
  }
  const auto coords = family_coordinates(prob, ref);
  if (coords && prob.cm) add("cm", cm_line_l_invariant(coords->first, *prob.cm));
  if (coords && prob.adjoint_cm) {
    const FieldElement t = coords->second.value_or(prob.coeff_field->zero());
    add("adjoint_cm", adjoint_cm_l_invariant(coords->first, t, *prob.adjoint_cm));
    const AdjointCMMatrices m = adjoint_cm_matrices(coords->first, t, *prob.adjoint_cm);
    add("adjoint_cm_dual", dual_l_invariant(m.Jf, m.Jc));
  }
  return out;
}

json cross_json(const std::vector<CrossCheck>& cs) {
  json j = json::array();
  for (const auto& c : cs)
    j.push_back({{"route", c.name}, {"value", c.value.to_string()}, {"agree", c.agree}});
  return j;
}

void print_report_text(std::ostream& out, const LInvariantReport& rep,
                       const std::vector<CrossCheck>& cs) {
  out << "refinement " << rep.refinement << "\n";
  out << "  verdict: " << rep.verdict.reason << "\n";
  out << "  Reg_p = " << rep.verdict.reg.to_string() << "\n";
  out << "  dim W° = " << rep.verdict.dim_w_circle << ", rank [W+ | W°] = " << rep.verdict.rank_sum
      << "\n";
  out << "  e = " << rep.e << "\n";
  if (!rep.verdict.regular) return;
  out << "  L = " << rep.value().to_string() << "\n";
  out << "  certified to " << rep.certified_precision << " digits (block and Schur agree)\n";
  for (const auto& c : cs)
    out << "  cross-check " << c.name << ": " << (c.agree ? "agree" : "DISAGREE") << " ("
        << c.value.to_string() << ")\n";
}

int cmd_validate(const Config& c, std::ostream& out, std::ostream& err) {
  GaloisProblem prob;
  try {
    prob = load(c);
  } catch (const LoadError& e) {
    if (c.format == "json") {
      out << json{{"ok", false}, {"failures", e.failures()}}.dump(2) << "\n";
    } else {
      err << "validation failed:\n";
      for (const auto& f : e.failures()) err << "  - " << f << "\n";
    }
    return kValidationFailure;
  }
  const Report rep = validate_arithmetic(prob);
  if (c.format == "json") {
    out << json{{"ok", rep.ok()},
                {"failures", rep.failures},
                {"warnings", rep.warnings},
                {"notes", rep.notes}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& n : rep.notes) out << "  " << n << "\n";
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
    for (const auto& f : rep.failures) err << "  - " << f << "\n";
    out << (rep.ok() ? "all checks pass" : "validation failed") << "\n";
  }
  return rep.ok() ? kOk : kValidationFailure;
}

int cmd_compute(const Config& c, std::ostream& out, std::ostream& err) {
  GaloisProblem prob;
  try {
    prob = load(c);
  } catch (const LoadError& e) {
    err << "validation failed:\n";
    for (const auto& f : e.failures()) err << "  - " << f << "\n";
    return kValidationFailure;
  }
  const Report vr = validate_arithmetic(prob);
  if (!vr.ok()) {
    err << "validation failed:\n";
    for (const auto& f : vr.failures) err << "  - " << f << "\n";
    return kValidationFailure;
  }
  const Analysis an = analyze(prob);
  json doc = {{"fixture", c.fixture}, {"p", prob.p}, {"precision", prob.precision}};
  int code = kOk;
  bool mismatch = false;

  if (!c.sweep.empty()) {
    if (c.sweep.rfind("s=", 0) != 0) throw std::invalid_argument("sweep spec must look like s=v1,v2,...");
    if (!prob.family) throw std::invalid_argument("fixture carries no refinement family to sweep");
    std::optional<FieldElement> t;
    if (!c.t.empty()) t = parse_scalar(c.t, prob);
    json rows = json::array();
    if (c.format == "text") out << std::left << std::setw(10) << "s" << "  " << "L(V, D_s)\n";
    for (const auto& tok : split_list(c.sweep.substr(2))) {
      const Refinement ref = prob.family_member(parse_param(tok, prob), t);
      const LInvariantReport rep = l_invariant(an, ref);
      const auto cs = c.cross_check ? cross_checks(an, ref, rep) : std::vector<CrossCheck>{};
      for (const auto& x : cs) mismatch |= !x.agree;
      json row = report_to_json(rep);
      row["s"] = tok;
      if (c.cross_check) row["cross_check"] = cross_json(cs);
      rows.push_back(row);
      if (c.format == "text") {
        out << std::left << std::setw(10) << tok << "  "
            << (rep.verdict.regular ? rep.value().to_string() : "SINGULAR: " + rep.verdict.reason)
            << "\n";
        for (const auto& x : cs)
          out << std::setw(12) << "" << x.name << ": " << (x.agree ? "agree" : "DISAGREE") << "\n";
      }
    }
    doc["sweep"] = rows;
  } else {
    std::vector<Refinement> refs;
    if (!c.refinement.empty())
      refs.push_back(prob.refinement(c.refinement));
    else
      refs = prob.refinements;
    if (refs.empty()) throw std::invalid_argument("fixture has no refinements; use --sweep");
    json reports = json::array();
    for (const auto& ref : refs) {
      const LInvariantReport rep = l_invariant(an, ref);
      const auto cs = c.cross_check ? cross_checks(an, ref, rep) : std::vector<CrossCheck>{};
      for (const auto& x : cs) mismatch |= !x.agree;
      json r = report_to_json(rep);
      if (c.cross_check) r["cross_check"] = cross_json(cs);
      reports.push_back(r);
      if (c.format == "text") print_report_text(out, rep, cs);
      if (!rep.verdict.regular) code = kSingularRefinement;
    }
    doc["reports"] = reports;
  }
  if (c.format == "json") out << doc.dump(2) << "\n";
  if (mismatch) {
    err << "cross-check: closed form and engine disagree; the fixture's special data is "
           "inconsistent\n";
    return kValidationFailure;
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"L-invariants of Artin motives"};
  app.require_subcommand(1);
  Config c;

  auto* validate = app.add_subcommand("validate", "check a fixture's schema and arithmetic");
  validate->add_option("fixture", c.fixture, "fixture path or name under LINV_FIXTURE_DIR")
      ->required();
  validate->add_option("--precision", c.precision, "override the working precision");
  validate->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));

  auto* compute = app.add_subcommand("compute", "compute L-invariants");
  compute->add_option("fixture", c.fixture, "fixture path or name under LINV_FIXTURE_DIR")
      ->required();
  auto* ref_opt = compute->add_option("--refinement", c.refinement, "named refinement");
  auto* sweep_opt =
      compute->add_option("--sweep", c.sweep, "s=v1,v2,... over the fixture's family (inf, S allowed)");
  ref_opt->excludes(sweep_opt);
  compute->add_option("--t", c.t, "fixed t for two-parameter families")->needs(sweep_opt);
  compute->add_flag("--cross-check", c.cross_check, "also evaluate applicable closed forms");
  compute->add_option("--precision", c.precision, "override the working precision")
      ->check(CLI::PositiveNumber);
  compute->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*validate) return cmd_validate(c, out, err);
    return cmd_compute(c, out, err);
  } catch (const PrecisionError& e) {
    err << "precision shortfall: " << e.what() << "\n";
    if (e.needed_digits() > 0)
      err << "rerun with --precision " << 2 * e.needed_digits()
          << " or more (the fixture data must carry that many digits too)\n";
    return kPrecisionShortfall;
  } catch (const SingularRefinement& e) {
    err << "singular refinement: " << e.what() << "\n";
    return kSingularRefinement;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace linv::cli
