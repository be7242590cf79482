// Acceptance run: one PASS/FAIL line per criterion.  Tolerances are fixed
// below; the run is deterministic (all randomness is seeded).
//
//   acceptance [--allow-known-red]
//
// Exit 0 when every line passes.  --allow-known-red also exits 0 when the
// only failing lines are listed in kKnownRed (documented in the README);
// those lines still print FAIL.

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <set>

#include "linv/synthetic.hpp"

using namespace linv;

namespace {

// Tolerances.
constexpr long kPrecision = 40;
constexpr long kHighPrecision = 80;
constexpr long kMinDigits = 30;
constexpr int kRouteFixtures = 200;
constexpr double kRouteSeconds = 10.0;
constexpr int kRebaseFixtures = 20;
constexpr int kRebasesPerFixture = 50;
constexpr int kRegularityCases = 200;
constexpr int kGrossSynthetic = 30;
constexpr double kQiSeconds = 1.0;
constexpr int kSweepValues = 20;
constexpr int kAdjointTValues = 10;
constexpr int kLogCases = 1000;
constexpr std::uint64_t kSeed = 20240917;

const std::set<std::string> kKnownRed = {"qi-literal"};

struct Line {
  std::string id;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(const std::string& id, bool pass, const std::string& detail) {
  lines.push_back({id, pass, detail});
  std::cout << (pass ? "PASS  " : "FAIL  ") << id << ": " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }

// x at precision N agrees with y at every digit certified for x.
bool extends(const FieldElement& low, const FieldElement& high) {
  if (high.absolute_precision() < low.absolute_precision()) return false;
  return (low - high.in_field(low.field())).is_zero();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Random fixtures with a refinement; each case keeps its own seed so the
// same case can be rebuilt at another precision.

struct Case {
  SyntheticSpec spec;
  std::uint64_t ref_seed = 0;
  FieldElement value;
  long certified = 0;
  int e = 0;
  int dplus = 0;
};

struct Built {
  GaloisProblem prob;
  std::unique_ptr<Analysis> an;
  std::optional<Refinement> ref;
};

Built build(const SyntheticSpec& spec, std::uint64_t ref_seed, long precision, bool singular) {
  SyntheticSpec s = spec;
  s.precision = precision;
  Built b;
  b.prob = load_fixture(synthetic_fixture(s));
  b.an = std::make_unique<Analysis>(analyze(b.prob));
  std::mt19937_64 rng(ref_seed);
  b.ref = random_refinement(*b.an, rng, 2, singular);
  return b;
}

std::vector<Case> route_cases;

void route_agreement() {
  std::mt19937_64 rng(kSeed);
  const auto t0 = std::chrono::steady_clock::now();
  int disagreements = 0, tried = 0;
  long min_digits = kPrecision;
  while (static_cast<int>(route_cases.size()) < kRouteFixtures) {
    ++tried;
    Case c;
    c.spec = random_spec(rng, kPrecision, 4);
    c.ref_seed = rng();
    const Built b = build(c.spec, c.ref_seed, kPrecision, false);
    if (!b.ref) continue;
    try {
      const auto rep = l_invariant(*b.an, *b.ref);
      if (!rep.verdict.regular) continue;
      c.value = rep.value();
      c.certified = rep.certified_precision;
      c.e = rep.e;
      c.dplus = b.an->dplus;
      min_digits = std::min(min_digits, rep.certified_precision);
      if (!same(rep.value_block, rep.value_schur)) ++disagreements;
    } catch (const std::logic_error&) {
      ++disagreements;  // raised by the engine when the two routes differ
    }
    route_cases.push_back(c);
  }
  const double secs = seconds_since(t0);
  report("route-agreement",
         disagreements == 0 && min_digits >= kMinDigits && secs < kRouteSeconds,
         std::to_string(route_cases.size()) + " regular fixtures (" + std::to_string(tried) +
             " drawn), " + std::to_string(disagreements) + " disagreements, min certified " +
             std::to_string(min_digits) + " digits, " + fmt(secs) + " s [need 0, >= " +
             std::to_string(kMinDigits) + ", < " + fmt(kRouteSeconds) + " s]");
}

void basis_independence() {
  int fixtures = 0, failures = 0, checks = 0;
  std::mt19937_64 rng(kSeed + 1);
  for (const Case& c : route_cases) {
    if (fixtures == kRebaseFixtures) break;
    if (c.e == 0 || c.dplus == 0) continue;
    ++fixtures;
    const Built b = build(c.spec, c.ref_seed, kPrecision, false);
    const ExtraZeros ez = extra_zero_order(*b.an, *b.ref);
    const NotationBases base = default_bases(*b.an, *b.ref);
    for (int i = 0; i < kRebasesPerFixture; ++i) {
      ++checks;
      try {
        const NotationBases nb = random_rebase(base, static_cast<int>(ez.W1_plus.cols()),
                                               b.prob.coeff_field, rng);
        const LValues v = l_invariant_from_matrices(assemble_matrices(nb), b.an->ceiling);
        if (!same(v.block, c.value)) ++failures;
      } catch (const std::exception&) {
        ++failures;
      }
    }
  }
  report("basis-independence", fixtures == kRebaseFixtures && failures == 0,
         std::to_string(fixtures) + " fixtures x " + std::to_string(kRebasesPerFixture) +
             " rebasings, " + std::to_string(failures) + " changed values out of " +
             std::to_string(checks));
}

void regularity_equivalence() {
  std::mt19937_64 rng(kSeed + 2);
  int cases = 0, disagreements = 0, singular = 0;
  while (cases < kRegularityCases) {
    const SyntheticSpec spec = random_spec(rng, kPrecision, 4);
    const std::uint64_t seed = rng();
    const bool want_singular = cases % 2 == 0;
    const Built b = build(spec, seed, kPrecision, want_singular);
    if (!b.ref || b.an->dplus == 0) continue;
    ++cases;
    try {
      const auto v = is_regular(*b.an, *b.ref);
      if (v.reg_nonzero != v.direct_sum) ++disagreements;
      if (!v.regular) ++singular;
    } catch (const PrecisionError&) {
      ++disagreements;  // is_regular raises when the criteria split
    }
  }
  report("regularity-equivalence", disagreements == 0 && singular > 0,
         std::to_string(cases) + " refinements (" + std::to_string(singular) + " singular), " +
             std::to_string(disagreements) + " disagreements between Reg_p != 0 and W = W+ (+) W°");
}

// ---------------------------------------------------------------------------

struct GrossCase {
  std::string name;
  std::function<nlohmann::json(long)> make;
  FieldElement value;
};

std::vector<GrossCase> gross_cases;

void gross_agreement() {
  gross_cases.push_back({"Q(i)", [](long n) { return qi_fixture(n); }, {}});
  gross_cases.push_back({"C2 split", [](long n) { return c2_split_fixture(n, 5); }, {}});
  std::mt19937_64 rng(kSeed + 3);
  int found = 0;
  while (found < kGrossSynthetic) {
    const SyntheticSpec spec = random_spec(rng, kPrecision, 4);
    SyntheticSpec probe = spec;
    const GaloisProblem prob = load_fixture(synthetic_fixture(probe));
    if (analyze(prob).dplus != 0) continue;
    ++found;
    gross_cases.push_back({spec.group + " #" + std::to_string(found),
                           [spec](long n) {
                             SyntheticSpec s = spec;
                             s.precision = n;
                             return synthetic_fixture(s);
                           },
                           {}});
  }
  int failures = 0;
  long min_digits = kPrecision;
  for (auto& g : gross_cases) {
    const GaloisProblem prob = load_fixture(g.make(kPrecision));
    const Analysis an = analyze(prob);
    const auto rep = l_invariant(an, Refinement{"zero", PMatrix(an.d, 0), true, {}, {}});
    const FieldElement sign = prob.coeff_field->from_integer(rep.e % 2 == 0 ? 1 : -1);
    g.value = rep.value();
    min_digits = std::min(min_digits, rep.value().absolute_precision());
    if (!rep.verdict.regular || !same(rep.value(), sign * gross_regulator(an))) ++failures;
  }
  report("gross-agreement", failures == 0,
         std::to_string(gross_cases.size()) + " fixtures with d+ = 0 (Q(i), C2 split, " +
             std::to_string(kGrossSynthetic) + " synthetic), " + std::to_string(failures) +
             " mismatches of L = (-1)^e R_p, min certified " + std::to_string(min_digits) +
             " digits");
}

// ---------------------------------------------------------------------------
// Q(i): an oracle in plain integer arithmetic mod 5^m.

Integer pow_mod(const Integer& b, const Integer& e, const Integer& m) {
  Integer r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer p_power(long p, long m) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, m);
  return r;
}

/// log_p of a p-adic unit x, via log(x^(p-1)) / (p-1) and the series.
Integer series_log(const Integer& x, long p, long m) {
  const Integer pm = p_power(p, m + 20);
  Integer z = pow_mod(x, p - 1, pm) - 1;
  Integer sum = 0, zn = z;
  for (long n = 1; n < 4 * (m + 20); ++n) {
    long v = 0, nn = n;
    while (nn % p == 0) {
      nn /= p;
      ++v;
    }
    Integer t = zn / p_power(p, v), inv, nz = nn;
    mpz_invert(inv.get_mpz_t(), nz.get_mpz_t(), pm.get_mpz_t());
    t *= inv;
    sum += (n % 2 == 1) ? t : Integer(-t);
    sum %= pm;
    zn = (zn * z) % pm;
  }
  Integer inv, d = p - 1;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), pm.get_mpz_t());
  const Integer out_mod = p_power(p, m);
  Integer r = (sum * inv) % out_mod;
  if (r < 0) r += out_mod;
  return r;
}

/// log_5(iota(2+i) / iota(2-i)) with iota(i) the 4th root of unity = 2 mod 5.
/// (2+i)/(2-i) = (2+i)^2 / 5 = (3 + 4i) / 5 and log 5 = 0.
Integer qi_oracle(long m) {
  const Integer mod = p_power(5, m + 20);
  Integer i = 2;
  for (long k = 0; k < m + 20; ++k) i = pow_mod(i, 5, mod);  // Teichmuller by iteration
  return series_log((3 + 4 * i) % mod, 5, m);
}

void qi_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const GaloisProblem prob = load_fixture(qi_fixture(kPrecision));
  const auto rep = l_invariant(prob, prob.refinement("default"));
  const double secs = seconds_since(t0);
  const FieldPtr& k = prob.coeff_field;
  const FieldElement oracle = k->from_integer(qi_oracle(kPrecision)).truncated(kPrecision);
  const FieldElement value = rep.value();
  const long agree_plus = value.agreement_digits(oracle);
  const long agree_minus = value.agreement_digits(-oracle);
  report("qi-literal", rep.verdict.regular && agree_minus >= kMinDigits && secs < kQiSeconds,
         "L = -log_5(iota(2+i)/iota(2-i)) as stated: agreement " + std::to_string(agree_minus) +
             " digits [need >= " + std::to_string(kMinDigits) +
             "]; the engine, the Gross route and the oracle give the opposite sign (see README)");
  report("qi-corrected", rep.verdict.regular && rep.e == 1 && agree_plus >= kMinDigits &&
                             secs < kQiSeconds,
         "L = +log_5(iota(2+i)/iota(2-i)): agreement " + std::to_string(agree_plus) +
             " digits with the integer-series oracle, e = " + std::to_string(rep.e) + ", " +
             fmt(secs) + " s [need >= " + std::to_string(kMinDigits) + ", < " +
             fmt(kQiSeconds) + " s]");
}

// ---------------------------------------------------------------------------

std::vector<FieldElement> cm_values;  // s = -10..9, then inf

std::vector<FieldElement> cm_sweep(long precision, bool* ok, std::string* detail) {
  const GaloisProblem prob = load_fixture(cm_fixture(precision, 11));
  const Analysis an = analyze(prob);
  const CMSpecial& cm = *prob.cm;
  const FieldPtr& k = prob.coeff_field;
  std::vector<FieldElement> out;
  int mismatches = 0, singular = 0;
  for (int i = 0; i < kSweepValues; ++i) {
    const auto s = ProjectiveParam::at(k->from_integer(i - kSweepValues / 2));
    const auto rep = l_invariant(an, prob.family_member(s));
    if (!rep.verdict.regular) {
      ++singular;
      out.push_back(k->zero());
      continue;
    }
    out.push_back(rep.value());
    if (!same(rep.value(), cm_line_l_invariant(s, cm))) ++mismatches;
  }
  const auto inf = l_invariant(an, prob.family_member(ProjectiveParam::infinity()));
  out.push_back(inf.value());
  if (!same(inf.value(), cm_line_l_invariant(ProjectiveParam::infinity(), cm))) ++mismatches;
  const bool at_slope =
      l_invariant(an, prob.family_member(ProjectiveParam::at(cm.slope))).singular();
  const FieldElement near = cm.slope + k->from_integer(7).pow(5);
  const bool near_regular = !l_invariant(an, prob.family_member(ProjectiveParam::at(near))).singular();
  if (ok) *ok = mismatches == 0 && singular == 0 && at_slope && near_regular;
  if (detail)
    *detail = std::to_string(kSweepValues) + " values of s and s = inf: " +
              std::to_string(mismatches) + " mismatches, " + std::to_string(singular) +
              " unexpected singular; singular at s = S_psi: " + (at_slope ? "yes" : "no") +
              ", regular at S_psi + 7^5: " + (near_regular ? "yes" : "no");
  return out;
}

void cm_criterion() {
  bool ok = false;
  std::string detail;
  cm_values = cm_sweep(kPrecision, &ok, &detail);
  report("cm-sweep", ok, detail);
}

std::vector<FieldElement> adjoint_values;

std::vector<FieldElement> adjoint_run(long precision, bool* ok, std::string* detail) {
  const GaloisProblem prob = load_fixture(adjoint_cm_fixture(precision, 21));
  const Analysis an = analyze(prob);
  const AdjointCMSpecial& a = *prob.adjoint_cm;
  const FieldPtr& k = prob.coeff_field;
  const FieldElement two_lp = k->from_integer(2) * a.L_p;
  std::vector<FieldElement> out;
  int t_dependence = 0, endpoint = 0, dual = 0, closed = 0, e_wrong = 0;
  const std::vector<std::pair<ProjectiveParam, std::optional<FieldElement>>> lines_s = {
      {ProjectiveParam::at(k->from_integer(2)), std::nullopt},
      {ProjectiveParam::at(k->zero()), two_lp * a.l_phi},
      {ProjectiveParam::infinity(), two_lp * a.l_phi_bar}};
  for (const auto& [s, expect] : lines_s) {
    std::optional<FieldElement> first;
    for (int ti = 0; ti < kAdjointTValues; ++ti) {
      const FieldElement t = k->from_integer(ti * 3 - 7);
      const auto rep = l_invariant(an, prob.family_member(s, t));
      if (!rep.verdict.regular) {
        ++t_dependence;
        continue;
      }
      if (rep.e != 2) ++e_wrong;
      if (!first) {
        first = rep.value();
        out.push_back(rep.value());
      }
      if (!same(rep.value(), *first)) ++t_dependence;
      if (expect && !same(rep.value(), *expect)) ++endpoint;
      if (!same(rep.value(), adjoint_cm_l_invariant(s, t, a))) ++closed;
      // Dual route: L = (-1)^e det(Jf Jc^-1) with e = 2, i.e. sign +1.
      const AdjointCMMatrices m = adjoint_cm_matrices(s, t, a);
      const FieldElement raw = determinant(PMatrix(m.Jf * inverse(m.Jc)));
      if (!same(rep.value(), raw)) ++dual;
    }
  }
  if (ok) *ok = t_dependence + endpoint + dual + closed + e_wrong == 0;
  if (detail)
    *detail = std::to_string(kAdjointTValues) + " values of t on s = 2, 0, inf: " +
              std::to_string(t_dependence) + " t-dependent, " + std::to_string(endpoint) +
              " endpoint mismatches (2 L_p L(phi), 2 L_p L(phi_bar)), " + std::to_string(closed) +
              " closed-form mismatches, " + std::to_string(dual) + " dual-sign failures, " +
              std::to_string(e_wrong) + " with e != 2";
  return out;
}

void adjoint_criterion() {
  bool ok = false;
  std::string detail;
  adjoint_values = adjoint_run(kPrecision, &ok, &detail);
  report("adjoint-cm", ok, detail);
}

// ---------------------------------------------------------------------------

FieldElement random_element(const FieldPtr& k, std::mt19937_64& rng, long shift, bool unit_lead) {
  std::vector<Integer> c(k->degree());
  const Integer mod = k->prime_power(k->precision());
  for (auto& x : c) {
    Integer v = 0;
    for (int w = 0; w < 4; ++w) v = v * Integer(static_cast<unsigned long>(rng() >> 1)) + static_cast<long>(rng() % 1000);
    x = v % mod;
  }
  if (unit_lead && c[0] % k->prime() == 0) c[0] += 1;
  return k->from_coords(shift, k->precision(), c);
}

void log_suite() {
  const std::vector<FieldPtr> fields = {
      make_field(5, 1, {}, kPrecision),
      make_field(5, 2, {}, kPrecision),
      make_field(7, 3, {}, kPrecision),
      make_field(2, 2, {}, kPrecision),
      make_field(13, 1, {}, kPrecision),
      LocalField::make(3, 1, {{Integer(-3)}, {Integer(0)}}, kPrecision),
      LocalField::make(5, 2, {{Integer(5), Integer(5)}, {Integer(0), Integer(5)}}, kPrecision),
  };
  std::mt19937_64 rng(kSeed + 4);
  int hom = 0, branch = 0, teich = 0, trace = 0;
  long min_prec = kPrecision;
  auto note = [&](const FieldElement& x) { min_prec = std::min(min_prec, x.absolute_precision()); };
  for (int i = 0; i < kLogCases; ++i) {
    const FieldPtr& k = fields[i % fields.size()];
    const FieldElement x = random_element(k, rng, static_cast<long>(rng() % 3), true);
    const FieldElement y = random_element(k, rng, static_cast<long>(rng() % 3), true);
    const FieldElement u = random_element(k, rng, 0, true);
    try {
      const FieldElement lx = iwasawa_log(x), ly = iwasawa_log(y), lxy = iwasawa_log(x * y);
      note(lxy);
      if (!same(lxy, lx + ly)) ++hom;
    } catch (const std::exception&) {
      ++hom;
    }
    try {
      const long j = 1 + static_cast<long>(rng() % 5);
      const FieldElement lp = iwasawa_log(k->from_integer(k->prime()).pow(j) * u);
      note(lp);
      if (!same(lp, iwasawa_log(u)) || !iwasawa_log(k->from_integer(k->prime())).is_zero())
        ++branch;
    } catch (const std::exception&) {
      ++branch;
    }
    try {
      const FieldElement lt = iwasawa_log(teichmuller(x.valuation_floor() == 0 ? x : u) * y);
      note(lt);
      if (!same(lt, iwasawa_log(y))) ++teich;
    } catch (const std::exception&) {
      ++teich;
    }
    try {
      const FieldElement ln = iwasawa_log(norm_to_base(x));
      const FieldElement tl = trace_to_base(iwasawa_log(x));
      note(ln);
      if (!same(ln, tl)) ++trace;
    } catch (const std::exception&) {
      ++trace;
    }
  }
  report("iwasawa-log", hom + branch + teich + trace == 0,
         std::to_string(kLogCases) + " cases each over " + std::to_string(fields.size()) +
             " fields (ramified included): homomorphism " + std::to_string(hom) +
             ", log p = 0 " + std::to_string(branch) + ", Teichmuller kill " +
             std::to_string(teich) + ", log N = Tr log " + std::to_string(trace) +
             " failures; min precision checked " + std::to_string(min_prec));
}

// ---------------------------------------------------------------------------

void precision_stability() {
  int compared = 0, failures = 0;
  auto check = [&](const FieldElement& low, const FieldElement& high) {
    ++compared;
    if (!extends(low, high)) ++failures;
  };
  for (const Case& c : route_cases) {
    const Built b = build(c.spec, c.ref_seed, kHighPrecision, false);
    if (!b.ref) {
      ++failures;
      continue;
    }
    const auto rep = l_invariant(*b.an, *b.ref);
    if (!rep.verdict.regular) {
      ++failures;
      continue;
    }
    check(c.value, rep.value());
  }
  for (const auto& g : gross_cases) {
    const GaloisProblem prob = load_fixture(g.make(kHighPrecision));
    const Analysis an = analyze(prob);
    check(g.value, l_invariant(an, Refinement{"zero", PMatrix(an.d, 0), true, {}, {}}).value());
  }
  {
    const GaloisProblem low = load_fixture(qi_fixture(kPrecision));
    const GaloisProblem high = load_fixture(qi_fixture(kHighPrecision));
    check(l_invariant(low, low.refinement("default")).value(),
          l_invariant(high, high.refinement("default")).value());
  }
  const auto cm_high = cm_sweep(kHighPrecision, nullptr, nullptr);
  for (std::size_t i = 0; i < cm_values.size() && i < cm_high.size(); ++i)
    check(cm_values[i], cm_high[i]);
  const auto adj_high = adjoint_run(kHighPrecision, nullptr, nullptr);
  for (std::size_t i = 0; i < adjoint_values.size() && i < adj_high.size(); ++i)
    check(adjoint_values[i], adj_high[i]);
  report("precision-stability", failures == 0,
         std::to_string(compared) + " acceptance values recomputed at N = " +
             std::to_string(kHighPrecision) + ", " + std::to_string(failures) +
             " disagree with N = " + std::to_string(kPrecision) + " on certified digits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  bool allow_known_red = false;
  app.add_flag("--allow-known-red", allow_known_red,
               "exit 0 when the only failures are the documented known-red lines");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<void()>>> steps = {
      {"route-agreement", route_agreement},
      {"basis-independence", basis_independence},
      {"regularity-equivalence", regularity_equivalence},
      {"gross-agreement", gross_agreement},
      {"qi", qi_criteria},
      {"cm-sweep", cm_criterion},
      {"adjoint-cm", adjoint_criterion},
      {"iwasawa-log", log_suite},
      {"precision-stability", precision_stability},
  };
  for (const auto& [name, fn] : steps) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(name, false, std::string("aborted: ") + e.what());
    }
  }

  int failed = 0, unexpected = 0;
  for (const auto& l : lines) {
    if (l.pass) continue;
    ++failed;
    if (!kKnownRed.count(l.id)) ++unexpected;
  }
  std::cout << lines.size() - failed << "/" << lines.size() << " criteria pass";
  if (failed > 0) std::cout << " (" << failed - unexpected << " known red)";
  std::cout << std::endl;
  if (failed == 0) return 0;
  return allow_known_red && unexpected == 0 ? 0 : 1;
}
