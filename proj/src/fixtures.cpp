#include "linv/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace linv {

using nlohmann::json;

LoadError::LoadError(std::vector<std::string> failures)
    : std::runtime_error([&] {
        std::string s = "fixture failed to load:";
        for (const auto& f : failures) s += "\n  - " + f;
        return s;
      }()),
      failures_(std::move(failures)) {}

namespace {

struct Ctx {
  std::vector<std::string> failures;
  void fail(const std::string& s) { failures.push_back(s); }
  void checkpoint() {
    if (!failures.empty()) throw LoadError(failures);
  }
};

const json& need(const json& j, const char* key, const std::string& where, Ctx& ctx) {
  static const json null_value;
  if (!j.is_object() || !j.contains(key)) {
    ctx.fail(where + ": missing key '" + key + "'");
    return null_value;
  }
  return j.at(key);
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) return Integer(j.get<std::string>());
  throw std::invalid_argument("expected an integer");
}

Rational rational_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument("rational must be [num, den]");
    Rational q(integer_from_json(j[0]), integer_from_json(j[1]));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return q;
  }
  return Rational(integer_from_json(j));
}

json integer_to_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

// Entry of a W matrix, vector or scalar: integer, [num, den] or element object.
FieldElement entry_from_json(const json& j, const FieldPtr& k) {
  if (j.is_object()) return element_from_json(j, k);
  return k->from_rational(rational_from_json(j));
}

// Inputs are cut down to the working precision (relative to their valuation).
FieldElement cap_to(const FieldElement& x, long n) {
  if (x.is_exact()) return x;
  if (x.is_zero()) return x.truncated(n);
  return x.truncated(x.valuation_floor() + n);
}

PVector vector_from_json(const json& j, const FieldPtr& k, int d, const std::string& where,
                         Ctx& ctx) {
  PVector v(d);
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    ctx.fail(where + ": expected a vector of length " + std::to_string(d));
    for (int i = 0; i < d; ++i) v(i) = k->zero();
    return v;
  }
  for (int i = 0; i < d; ++i) v(i) = cap_to(entry_from_json(j[i], k), k->precision());
  return v;
}

template <class S, class F>
Mat<S> matrix_from_json(const json& j, int rows, int cols, const std::string& where, Ctx& ctx,
                        F&& parse) {
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = S(0);
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    ctx.fail(where + ": expected " + std::to_string(rows) + " rows");
    return m;
  }
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      ctx.fail(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
               " entries");
      return m;
    }
    for (int c = 0; c < cols; ++c) m(r, c) = parse(j[r][c]);
  }
  return m;
}

ProjectiveParam param_from_json(const json& j, const FieldPtr& k) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "∞" || s == "infinity") return ProjectiveParam::infinity();
  }
  return ProjectiveParam::at(entry_from_json(j, k));
}

}  // namespace

// ---------------------------------------------------------------------------
// Elements

json element_to_json(const FieldElement& x) {
  json j;
  if (!x.is_typed()) {
    j["shift"] = 0;
    j["prec"] = "exact";
    j["coeffs"] = json::array({x.is_zero() ? 0 : 1});
    return j;
  }
  const auto& k = x.field();
  j["shift"] = x.is_zero() ? 0 : x.shift();
  if (x.is_exact()) {
    j["prec"] = "exact";
    json coeffs = json::array();
    for (const auto& c : x.coords()) coeffs.push_back(integer_to_json(c));
    j["coeffs"] = coeffs;
    return j;
  }
  j["prec"] = x.absolute_precision();
  json coeffs = json::array();
  const Integer p = k->prime();
  for (const auto& c0 : x.coords()) {
    json digits = json::array();
    Integer c = c0;
    while (c > 0) {
      Integer d = c % p;
      digits.push_back(d.get_si());
      c /= p;
    }
    coeffs.push_back(digits);
  }
  j["coeffs"] = coeffs;
  return j;
}

FieldElement element_from_json(const json& j, const FieldPtr& k) {
  if (!j.is_object()) throw std::invalid_argument("element must be an object");
  const long shift = j.value("shift", 0L);
  long prec = kExact;
  if (j.contains("prec") && !(j["prec"].is_string() && j["prec"] == "exact"))
    prec = j["prec"].get<long>();
  const json& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) > k->degree())
    throw std::invalid_argument("element has more coordinates than the field degree");
  std::vector<Integer> c(k->degree(), 0);
  const Integer p = k->prime();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_array()) {
      Integer acc = 0, pw = 1;
      for (const auto& d : coeffs[i]) {
        const long dv = d.get<long>();
        if (dv < 0 || dv >= k->prime()) throw std::invalid_argument("digit out of range");
        acc += pw * dv;
        pw *= p;
      }
      c[i] = acc;
    } else {
      c[i] = integer_from_json(coeffs[i]);
    }
  }
  if (prec >= kExact) {
    FieldElement x = k->from_coords(0, kExact, c);
    if (shift >= 0) return x * k->from_integer(k->prime_power(shift));
    return x.divided_by(k->prime_power(-shift));
  }
  return k->from_coords(shift, prec, std::move(c));
}

json vector_to_json(const PVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& x = v(i);
    if (x.is_typed() && x.is_exact() && x.field()->degree() >= 1 && x.shift() >= 0) {
      bool integral = true;
      for (int t = 1; t < x.field()->degree(); ++t)
        if (x.coords()[t] != 0) integral = false;
      if (integral) {
        a.push_back(integer_to_json(x.is_zero() ? Integer(0) : x.integral_coords()[0]));
        continue;
      }
    }
    a.push_back(element_to_json(x));
  }
  return a;
}

json matrix_to_json(const PMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    PVector r = m.row(i).transpose();
    rows.push_back(vector_to_json(r));
  }
  return rows;
}

json rational_to_json(const Rational& q) {
  if (q.get_den() == 1) return integer_to_json(q.get_num());
  return json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())});
}

// ---------------------------------------------------------------------------
// Problem helpers

const Refinement& GaloisProblem::refinement(const std::string& name) const {
  for (const auto& r : refinements)
    if (r.name == name) return r;
  std::string known;
  for (const auto& r : refinements) known += (known.empty() ? "" : ", ") + r.name;
  throw std::invalid_argument("no refinement named '" + name + "' (known: " + known + ")");
}

PRep GaloisProblem::unit_rep() const {
  const int r = units.rank_units;
  QRep sub{group, r, {}, "U_H"};
  for (const auto& m : units.action.matrices) sub.matrices.push_back(m.topLeftCorner(r, r));
  return to_field(sub, coeff_field);
}

PRep GaloisProblem::punit_rep() const {
  PRep out = to_field(units.action, coeff_field);
  out.name = "U_H^(p)";
  return out;
}

Refinement GaloisProblem::family_member(const ProjectiveParam& s,
                                        const std::optional<FieldElement>& t) const {
  if (!family) throw std::invalid_argument("fixture has no refinement family");
  const auto& fam = *family;
  PVector v;
  if (s.infinite)
    v = fam.s_direction;
  else
    v = fam.base + fam.s_direction * s.value;
  if (t) {
    if (!fam.t_direction) throw std::invalid_argument("family has no t parameter");
    v = v + *fam.t_direction * *t;
  }
  Refinement r;
  r.name = "s=" + s.to_string() + (t ? ", t=" + t->to_string() : "");
  r.basis = PMatrix(v.size(), 1);
  r.basis.col(0) = v;
  r.s = s;
  r.t = t;
  return r;
}

// ---------------------------------------------------------------------------
// Loading

GaloisProblem load_fixture(const json& j, const LoadOptions& opts) {
  Ctx ctx;
  GaloisProblem prob;
  if (!j.is_object()) throw LoadError({"fixture must be a JSON object"});

  try {
    // Fields.
    prob.p = need(j, "p", "top level", ctx).get<long>();
    prob.precision = need(j, "precision", "top level", ctx).get<long>();
    ctx.checkpoint();
    if (opts.precision_override) prob.precision = *opts.precision_override;
    const int fE = need(need(j, "E", "top level", ctx), "unramified_degree", "E", ctx).get<int>();
    const json& cf = need(j, "coeff_field", "top level", ctx);
    ctx.checkpoint();
    const int fK = need(cf, "unramified_degree", "coeff_field", ctx).get<int>();
    std::vector<std::vector<Integer>> eis;
    if (cf.contains("eisenstein") && !cf["eisenstein"].is_null()) {
      for (const auto& coeff : cf["eisenstein"]) {
        std::vector<Integer> c;
        if (coeff.is_array())
          for (const auto& x : coeff) c.push_back(integer_from_json(x));
        else
          c.push_back(integer_from_json(coeff));
        eis.push_back(std::move(c));
      }
    }
    ctx.checkpoint();
    try {
      prob.field_E = LocalField::make(prob.p, fE, {}, prob.precision);
      prob.coeff_field = LocalField::make(prob.p, fK, eis, prob.precision);
    } catch (const FieldError& e) {
      throw LoadError({std::string("field: ") + e.what()});
    }
    const FieldPtr& K = prob.coeff_field;
    const long N = prob.precision;

    // Group.
    const json& gj = need(j, "group", "top level", ctx);
    ctx.checkpoint();
    auto group = std::make_shared<FiniteGroup>();
    group->order = need(gj, "order", "group", ctx).get<int>();
    group->mult = need(gj, "mult", "group", ctx).get<std::vector<std::vector<int>>>();
    group->frobenius = need(gj, "frobenius", "group", ctx).get<int>();
    group->conjugation = need(gj, "conjugation", "group", ctx).get<int>();
    group->Gp = need(gj, "Gp", "group", ctx).get<std::vector<int>>();
    ctx.checkpoint();
    {
      Report gr = validate_group(*group);
      for (const auto& f : gr.failures) ctx.fail("group: " + f);
      ctx.checkpoint();
    }
    prob.group = group;
    const int n = group->order;

    // W.
    const json& wj = need(j, "W", "top level", ctx);
    ctx.checkpoint();
    const int d = need(wj, "dim", "W", ctx).get<int>();
    const json& wm = need(wj, "matrices", "W", ctx);
    prob.W_motivic = wj.value("motivic", false);
    ctx.checkpoint();
    if (!wm.is_array() || static_cast<int>(wm.size()) != n)
      throw LoadError({"W.matrices: expected one matrix per group element (" + std::to_string(n) +
                       ")"});
    prob.W = PRep{group, d, {}, "W"};
    for (int g = 0; g < n; ++g)
      prob.W.matrices.push_back(matrix_from_json<FieldElement>(
          wm[g], d, d, "W.matrices[" + std::to_string(g) + "]", ctx,
          [&](const json& e) { return cap_to(entry_from_json(e, K), N); }));
    ctx.checkpoint();
    if (auto bad = homomorphism_failure(prob.W))
      ctx.fail("W.matrices: homomorphism fails at (" + std::to_string(bad->first) + "," +
               std::to_string(bad->second) + ")");
    ctx.checkpoint();
    {
      std::vector<int> all(n);
      for (int g = 0; g < n; ++g) all[g] = g;
      if (d > 0 && fixed_subspace(prob.W, all).cols() > 0)
        ctx.fail("W: contains the trivial representation");
    }

    // Units.
    const json& uj = need(j, "units", "top level", ctx);
    ctx.checkpoint();
    auto& U = prob.units;
    U.rank_units = need(uj, "rank_units", "units", ctx).get<int>();
    U.rank_total = need(uj, "rank_total", "units", ctx).get<int>();
    const json& aj = need(uj, "action", "units", ctx);
    const json& oj = need(uj, "ord_p", "units", ctx);
    ctx.checkpoint();
    const int r = U.rank_units, R = U.rank_total;
    if (r < 0 || R < r) ctx.fail("units: need 0 <= rank_units <= rank_total");
    if (!aj.is_array() || static_cast<int>(aj.size()) != n)
      ctx.fail("units.action: expected one matrix per group element");
    ctx.checkpoint();
    U.action = QRep{group, R, {}, "units"};
    for (int g = 0; g < n; ++g)
      U.action.matrices.push_back(matrix_from_json<Rational>(
          aj[g], R, R, "units.action[" + std::to_string(g) + "]", ctx,
          [](const json& e) { return rational_from_json(e); }));
    ctx.checkpoint();
    if (auto bad = homomorphism_failure(U.action))
      ctx.fail("units.action: composition fails at (g,h) = (" + std::to_string(bad->first) + "," +
               std::to_string(bad->second) + ")");
    for (int g = 0; g < n; ++g)
      for (int i = r; i < R; ++i)
        for (int c = 0; c < r; ++c)
          if (U.action(g)(i, c) != 0) {
            ctx.fail("units.action[" + std::to_string(g) +
                     "]: global units are not mapped into the unit span");
            i = R;
            break;
          }
    U.ord_p = oj.get<std::vector<long>>();
    if (static_cast<int>(U.ord_p.size()) != R)
      ctx.fail("units.ord_p: expected " + std::to_string(R) + " entries");
    else
      for (int i = 0; i < r; ++i)
        if (U.ord_p[i] != 0)
          ctx.fail("units.ord_p[" + std::to_string(i) + "] must be 0 for a global unit");
    const bool has_emb = uj.contains("embeddings"), has_logs = uj.contains("logs");
    if (!has_emb && !has_logs) ctx.fail("units: need 'embeddings' or 'logs'");
    // Embeddings and logs only need R and the fields, so later sections are
    // still checked when the action or ord_p are wrong.
    if (has_emb && (!uj["embeddings"].is_array() || static_cast<int>(uj["embeddings"].size()) != R)) {
      ctx.fail("units.embeddings: expected " + std::to_string(R) + " elements");
    } else if (has_emb) {
      const json& ej = uj["embeddings"];
      for (int i = 0; i < R; ++i) {
        try {
          U.embeddings.push_back(cap_to(element_from_json(ej[i], prob.field_E), N));
        } catch (const std::exception& e) {
          ctx.fail("units.embeddings[" + std::to_string(i) + "]: " + e.what());
        }
      }
      if (static_cast<int>(U.embeddings.size()) == R) {
        FieldEmbedding iota(prob.field_E, K);
        for (int i = 0; i < R; ++i) {
          try {
            U.logs.push_back(iota(iwasawa_log(U.embeddings[i])));
          } catch (const PrecisionError& e) {
            ctx.fail("units.embeddings[" + std::to_string(i) + "]: log failed: " + e.what());
          }
        }
      }
    } else if (has_logs) {
      const json& lj = uj["logs"];
      if (!lj.is_array() || static_cast<int>(lj.size()) != R)
        ctx.fail("units.logs: expected " + std::to_string(R) + " elements");
      else
        for (int i = 0; i < R; ++i) U.logs.push_back(cap_to(entry_from_json(lj[i], K), N));
    }

    // Refinements.
    const int dplus = plus_dimension(prob.W);
    const PMatrix& frob = prob.W(group->frobenius);
    if (j.contains("refinements")) {
      for (const auto& rj : j["refinements"]) {
        Refinement ref;
        ref.name = rj.value("name", std::string("unnamed"));
        const std::string where = "refinement '" + ref.name + "'";
        ref.motivic = rj.value("motivic", false);
        const json& bj = need(rj, "basis", where, ctx);
        if (!bj.is_array()) continue;
        const int m = static_cast<int>(bj.size());
        ref.basis = PMatrix(d, m);
        for (int c = 0; c < m; ++c)
          ref.basis.col(c) = vector_from_json(bj[c], K, d, where + ".basis", ctx);
        if (rj.contains("s")) ref.s = param_from_json(rj["s"], K);
        if (rj.contains("t")) ref.t = entry_from_json(rj["t"], K);
        if (m != dplus) {
          ctx.fail(where + ": refinement dim ≠ d⁺ (got " + std::to_string(m) +
                   ", d⁺ = " + std::to_string(dplus) + ")");
          continue;
        }
        if (m > 0) {
          if (rank(ref.basis) != m) {
            ctx.fail(where + ": basis vectors are dependent");
            continue;
          }
          PMatrix both(d, 2 * m);
          both.leftCols(m) = ref.basis;
          both.rightCols(m) = frob * ref.basis;
          if (rank(both) != m) ctx.fail(where + ": not stable under Frobenius (G_p)");
        }
        prob.refinements.push_back(std::move(ref));
      }
    }
    if (j.contains("family")) {
      const json& fj = j["family"];
      RefinementFamily fam;
      fam.base = vector_from_json(need(fj, "base", "family", ctx), K, d, "family.base", ctx);
      fam.s_direction =
          vector_from_json(need(fj, "s_direction", "family", ctx), K, d, "family.s_direction", ctx);
      if (fj.contains("t_direction"))
        fam.t_direction = vector_from_json(fj["t_direction"], K, d, "family.t_direction", ctx);
      if (dplus != 1) ctx.fail("family: refinement families need d⁺ = 1");
      prob.family = std::move(fam);
    }

    // Closed-form inputs.
    if (j.contains("special")) {
      const json& sj = j["special"];
      auto scalar = [&](const json& block, const char* key, const std::string& where) {
        const json& v = need(block, key, where, ctx);
        if (v.is_null()) return K->zero();
        return cap_to(entry_from_json(v, K), N);
      };
      if (sj.contains("cm")) {
        const json& c = sj["cm"];
        prob.cm = CMSpecial{scalar(c, "slope", "special.cm"), scalar(c, "slope_bar", "special.cm"),
                            scalar(c, "l_psi", "special.cm"), scalar(c, "l_psi_bar", "special.cm")};
      }
      if (sj.contains("adjoint_cm")) {
        const json& c = sj["adjoint_cm"];
        const std::string w = "special.adjoint_cm";
        prob.adjoint_cm =
            AdjointCMSpecial{scalar(c, "L_p", w), scalar(c, "l_phi", w), scalar(c, "l_phi_bar", w),
                             scalar(c, "slope_phi", w), scalar(c, "slope_phi_bar", w)};
      }
    }
    if (j.contains("H_polynomial") && j["H_polynomial"].is_string())
      prob.H_polynomial = j["H_polynomial"].get<std::string>();
  } catch (const LoadError&) {
    throw;
  } catch (const PrecisionError& e) {
    ctx.fail(std::string("precision: ") + e.what());
  } catch (const std::exception& e) {
    ctx.fail(std::string("schema: ") + e.what());
  }
  ctx.checkpoint();
  return prob;
}

GaloisProblem load_fixture(std::istream& in, const LoadOptions& opts) {
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw LoadError({std::string("malformed JSON: ") + e.what()});
  }
  return load_fixture(j, opts);
}

GaloisProblem load_fixture_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(resolve_fixture_path(path));
  if (!in) throw LoadError({"cannot open fixture '" + path + "'"});
  return load_fixture(in, opts);
}

std::string resolve_fixture_path(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  if (const char* dir = std::getenv("LINV_FIXTURE_DIR")) {
    for (const auto& cand : {fs::path(dir) / name, fs::path(dir) / (name + ".json")})
      if (fs::exists(cand)) return cand.string();
  }
  return name;
}

// ---------------------------------------------------------------------------
// Serialization

json serialize(const GaloisProblem& prob) {
  json j;
  j["p"] = prob.p;
  j["precision"] = prob.precision;
  j["E"] = {{"unramified_degree", prob.field_E->unramified_degree()}};
  json eis = json::array();
  for (const auto& c : prob.coeff_field->eisenstein_poly()) {
    json cj = json::array();
    for (const auto& x : c) cj.push_back(integer_to_json(x));
    eis.push_back(cj);
  }
  j["coeff_field"] = {{"unramified_degree", prob.coeff_field->unramified_degree()},
                      {"eisenstein", eis}};
  const auto& g = *prob.group;
  j["group"] = {{"order", g.order},
                {"mult", g.mult},
                {"frobenius", g.frobenius},
                {"conjugation", g.conjugation},
                {"Gp", g.Gp}};
  json wm = json::array();
  for (const auto& m : prob.W.matrices) wm.push_back(matrix_to_json(m));
  j["W"] = {{"dim", prob.W.dim}, {"matrices", wm}, {"motivic", prob.W_motivic}};
  const auto& U = prob.units;
  json act = json::array();
  for (const auto& m : U.action.matrices) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m(i, c)));
      rows.push_back(row);
    }
    act.push_back(rows);
  }
  json uj = {{"rank_units", U.rank_units},
             {"rank_total", U.rank_total},
             {"action", act},
             {"ord_p", U.ord_p}};
  json vals = json::array();
  for (const auto& x : U.has_embeddings() ? U.embeddings : U.logs)
    vals.push_back(element_to_json(x));
  uj[U.has_embeddings() ? "embeddings" : "logs"] = vals;
  j["units"] = uj;
  json refs = json::array();
  for (const auto& r : prob.refinements) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < r.basis.cols(); ++c) basis.push_back(vector_to_json(r.basis.col(c)));
    json rj = {{"name", r.name}, {"basis", basis}, {"motivic", r.motivic}};
    if (r.s) rj["s"] = r.s->infinite ? json("inf") : element_to_json(r.s->value);
    if (r.t) rj["t"] = element_to_json(*r.t);
    refs.push_back(rj);
  }
  j["refinements"] = refs;
  if (prob.family) {
    json fj = {{"base", vector_to_json(prob.family->base)},
               {"s_direction", vector_to_json(prob.family->s_direction)}};
    if (prob.family->t_direction) fj["t_direction"] = vector_to_json(*prob.family->t_direction);
    j["family"] = fj;
  }
  if (prob.cm || prob.adjoint_cm) {
    json sj = json::object();
    if (prob.cm)
      sj["cm"] = {{"slope", element_to_json(prob.cm->slope)},
                  {"slope_bar", element_to_json(prob.cm->slope_bar)},
                  {"l_psi", element_to_json(prob.cm->l_psi)},
                  {"l_psi_bar", element_to_json(prob.cm->l_psi_bar)}};
    if (prob.adjoint_cm)
      sj["adjoint_cm"] = {{"L_p", element_to_json(prob.adjoint_cm->L_p)},
                          {"l_phi", element_to_json(prob.adjoint_cm->l_phi)},
                          {"l_phi_bar", element_to_json(prob.adjoint_cm->l_phi_bar)},
                          {"slope_phi", element_to_json(prob.adjoint_cm->slope_phi)},
                          {"slope_phi_bar", element_to_json(prob.adjoint_cm->slope_phi_bar)}};
    j["special"] = sj;
  }
  if (prob.H_polynomial) j["H_polynomial"] = *prob.H_polynomial;
  return j;
}

// ---------------------------------------------------------------------------
// Arithmetic validation

Report validate_arithmetic(const GaloisProblem& prob) {
  Report rep;
  const auto& g = *prob.group;
  const int dplus = plus_dimension(prob.W);
  const int f = static_cast<int>(fixed_subspace(prob.W, {g.frobenius}).cols());
  rep.notes.push_back("d = " + std::to_string(prob.dim()) + ", d+ = " + std::to_string(dplus) +
                      ", f = dim W^{G_p} = " + std::to_string(f));

  const int hu =
      prob.units.rank_units == 0 ? 0 : static_cast<int>(equivariant_homs(prob.W, prob.unit_rep()).size());
  if (hu == dplus)
    rep.notes.push_back("dim Hom_G(W, U_H) = d+ = " + std::to_string(dplus));
  else
    rep.failures.push_back("dim Hom_G(W, U_H) = " + std::to_string(hu) + " but d+ = " +
                           std::to_string(dplus));
  const int hp = static_cast<int>(equivariant_homs(prob.W, prob.punit_rep()).size());
  if (hp == dplus + f)
    rep.notes.push_back("dim Hom_G(W, U_H^(p)) = d+ + f = " + std::to_string(hp));
  else
    rep.failures.push_back("dim Hom_G(W, U_H^(p)) = " + std::to_string(hp) + " but d+ + f = " +
                           std::to_string(dplus + f));

  const int extra = prob.units.rank_total - prob.units.rank_units;
  if (extra == g.gp_index())
    rep.notes.push_back("rank_total - rank_units = [G:G_p] = " + std::to_string(extra));
  else
    rep.failures.push_back("rank_total - rank_units = " + std::to_string(extra) +
                           " but [G:G_p] = " + std::to_string(g.gp_index()));

  if (prob.units.has_embeddings()) {
    for (std::size_t i = 0; i < prob.units.embeddings.size(); ++i) {
      const auto& x = prob.units.embeddings[i];
      if (x.is_zero()) {
        rep.failures.push_back("embedding " + std::to_string(i) + " is zero to precision");
        continue;
      }
      const Rational v = x.valuation();
      if (v != prob.units.ord_p[i])
        rep.failures.push_back("embedding " + std::to_string(i) + " has valuation " +
                               v.get_str() + " but ord_p[" + std::to_string(i) + "] = " +
                               std::to_string(prob.units.ord_p[i]));
    }
    if (rep.ok()) rep.notes.push_back("embedding valuations match ord_p");
  } else {
    rep.warnings.push_back("embedding consistency unverifiable (fixture carries logs only)");
  }
  return rep;
}

}  // namespace linv
